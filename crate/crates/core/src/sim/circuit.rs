use serde::{Deserialize, Serialize};

use super::gate::Gate;
use super::relabel::Relabel;
use super::state::DensityState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Terminal measurement basis: plain computational basis, or with a
/// Hadamard layer appended to turn X-type observables into Z-type ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasBasis {
    Z,
    X,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    ops: Vec<Gate<T>>,
    relabel: Relabel,
    meas_basis: MeasBasis,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
            relabel: Relabel::identity(n_qubits),
            meas_basis: MeasBasis::Z,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate<T>] {
        &self.ops
    }

    pub fn relabel(&self) -> &Relabel {
        &self.relabel
    }

    pub fn relabel_mut(&mut self) -> &mut Relabel {
        &mut self.relabel
    }

    pub fn meas_basis(&self) -> MeasBasis {
        self.meas_basis
    }

    pub(crate) fn set_meas_basis(&mut self, basis: MeasBasis) {
        self.meas_basis = basis;
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<()> {
        if let Some(&q) = gate.targets.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::Target(format!("qubit {q} out of range for {} qubits", self.n_qubits)));
        }
        let checked = Gate::new(gate.kind, gate.targets)?;
        self.ops.push(checked);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate<T>>>(&mut self, gates: I) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Inserts a gate at position `at` (used for fault injection).
    pub fn insert(&mut self, at: usize, gate: Gate<T>) -> Result<()> {
        let mut tail = self.ops.split_off(at.min(self.ops.len()));
        let res = self.push(gate);
        self.ops.append(&mut tail);
        res
    }

    /// Noiseless evolution from `|0…0⟩`.
    pub fn run(&self) -> Result<DensityState<T>> {
        let mut state = DensityState::zero(self.n_qubits)?;
        for g in &self.ops {
            state.apply_gate(g)?;
        }
        Ok(state)
    }

    /// Noiseless outcome distribution with the accumulated relabeling applied.
    pub fn probabilities(&self) -> Result<Vec<T>> {
        self.run()?.probabilities(&self.relabel)
    }
}
