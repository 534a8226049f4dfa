use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix<T: Real>(self) -> [[Complex<T>; 2]; 2] {
        let o = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        match self {
            Pauli::I => [[one, o], [o, one]],
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }

    /// Whether the operator flips the computational-basis bit.
    pub fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind<T> {
    X,
    Y,
    Z,
    H,
    /// `exp(-i θ Y / 2)`, so `Ry(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
    Ry(T),
    /// Targets are `[control, target]`.
    Cnot,
}

impl<T> GateKind<T> {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }
}

/// A gate kind bound to the qubits it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<T> {
    pub kind: GateKind<T>,
    pub targets: Vec<usize>,
}

impl<T: Real> Gate<T> {
    /// Builds a gate, checking arity and distinctness of targets.
    pub fn new(kind: GateKind<T>, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::Target(format!(
                "{kind:?} expects {} target(s), got {}",
                kind.arity(),
                targets.len()
            )));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::Target(format!("duplicate target {}", targets[0])));
        }
        Ok(Self { kind, targets })
    }

    pub fn x(q: usize) -> Self {
        Self { kind: GateKind::X, targets: vec![q] }
    }

    pub fn y(q: usize) -> Self {
        Self { kind: GateKind::Y, targets: vec![q] }
    }

    pub fn z(q: usize) -> Self {
        Self { kind: GateKind::Z, targets: vec![q] }
    }

    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, targets: vec![q] }
    }

    pub fn ry(q: usize, theta: T) -> Self {
        Self { kind: GateKind::Ry(theta), targets: vec![q] }
    }

    /// Unchecked; [`DensityState::apply_gate`](super::DensityState::apply_gate)
    /// rejects `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, targets: vec![control, target] }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// 2×2 matrix of a single-qubit kind; `None` for CNOT.
    pub fn single_matrix(&self) -> Option<[[Complex<T>; 2]; 2]> {
        let c = |re: T| Complex::new(re, T::zero());
        match self.kind {
            GateKind::X => Some(Pauli::X.matrix()),
            GateKind::Y => Some(Pauli::Y.matrix()),
            GateKind::Z => Some(Pauli::Z.matrix()),
            GateKind::H => {
                let s = T::FRAC_1_SQRT_2();
                Some([[c(s), c(s)], [c(s), c(-s)]])
            }
            GateKind::Ry(theta) => {
                let half = theta / T::lit(2.0);
                let (s, co) = (half.sin(), half.cos());
                Some([[c(co), c(-s)], [c(s), c(co)]])
            }
            GateKind::Cnot => None,
        }
    }

    /// Full matrix on the gate's own qubits. For CNOT the basis index is
    /// `control_bit | target_bit << 1`.
    pub fn matrix(&self) -> Vec<Vec<Complex<T>>> {
        match self.single_matrix() {
            Some(m) => m.iter().map(|row| row.to_vec()).collect(),
            None => {
                let mut m = vec![vec![Complex::new(T::zero(), T::zero()); 4]; 4];
                for col in 0..4usize {
                    let row = if col & 1 == 1 { col ^ 2 } else { col };
                    m[row][col] = Complex::new(T::one(), T::zero());
                }
                m
            }
        }
    }
}
