use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Qubit relabeling accumulated from gate-free SWAPs.
///
/// `map[label] = physical qubit`: when reading an outcome, bit `label` of the
/// relabeled index comes from physical qubit `map[label]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relabel(Vec<usize>);

impl Relabel {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &p in &map {
            if p >= map.len() || seen[p] {
                return Err(Error::Format(format!("{map:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(Self(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Exchanges the physical qubits behind labels `a` and `b`.
    pub fn swap(&mut self, a: usize, b: usize) {
        self.0.swap(a, b);
    }

    pub fn physical(&self, label: usize) -> usize {
        self.0[label]
    }

    /// Maps a physical basis index to the relabeled one.
    pub fn physical_to_label_index(&self, physical: usize) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0usize, |acc, (label, &p)| acc | (((physical >> p) & 1) << label))
    }
}
