use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code422::{self, CnotDirection};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{Circuit, Gate, MeasBasis};

/// Which circuit realizes the ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Bare two-qubit circuit.
    Physical,
    /// Six-qubit [[4,2,2]] circuit with flag and rotation ancillas.
    Encoded,
}

impl Family {
    pub fn n_qubits(self) -> usize {
        match self {
            Family::Physical => 2,
            Family::Encoded => code422::N_QUBITS,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Physical => "physical",
            Family::Encoded => "encoded",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "physical" => Ok(Family::Physical),
            "encoded" => Ok(Family::Encoded),
            _ => Err(Error::Format(format!("unknown circuit family {s:?}"))),
        }
    }
}

/// `Ry(θ)` on q1, `CNOT(q1→q2)`, and `H⊗H` for the X basis.
pub fn physical_ansatz_circuit<T: Real>(theta: T, basis: MeasBasis) -> Circuit<T> {
    let mut c = Circuit::new(2);
    c.extend([Gate::ry(0, theta), Gate::cnot(0, 1)]).expect("static circuit");
    if basis == MeasBasis::X {
        c.extend([Gate::h(0), Gate::h(1)]).expect("static circuit");
        c.set_meas_basis(MeasBasis::X);
    }
    c
}

/// Encoded preparation, logical rotation, logical CNOT and optional
/// logical basis change on six qubits.
pub fn encoded_ansatz_circuit<T: Real>(theta: T, basis: MeasBasis) -> Circuit<T> {
    let mut c = code422::prep_circuit();
    c.extend(code422::rotation_gadget(theta)).expect("static circuit");
    code422::logical_cnot(&mut c, CnotDirection::OneToTwo);
    if basis == MeasBasis::X {
        code422::logical_basis_change(&mut c).expect("fresh circuit is in the Z basis");
    }
    c
}

pub fn ansatz_circuit<T: Real>(family: Family, theta: T, basis: MeasBasis) -> Circuit<T> {
    match family {
        Family::Physical => physical_ansatz_circuit(theta, basis),
        Family::Encoded => encoded_ansatz_circuit(theta, basis),
    }
}
