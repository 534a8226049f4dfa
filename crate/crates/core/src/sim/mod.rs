//! Dense density-matrix simulation for a handful of qubits.
//!
//! Qubit 0 is the least-significant bit of every basis index. All evolution
//! is exact channel evolution; shot noise is layered on afterwards with
//! [`sample_counts`].

mod circuit;
mod counts;
mod gate;
mod relabel;
mod state;

pub use circuit::{Circuit, MeasBasis};
pub use counts::{sample_counts, substream_seed, Counts, PROB_TOL};
pub use gate::{Gate, GateKind, Pauli};
pub use relabel::Relabel;
pub use state::{DensityState, MAX_QUBITS};
