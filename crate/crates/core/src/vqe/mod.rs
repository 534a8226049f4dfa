//! Hamiltonian evaluation, ansatz circuits, θ sweeps and energy
//! minimization for the two-qubit H₂ model.

mod ansatz;
mod curve;
mod hamiltonian;
mod mapping;
mod minimize;
mod noise_scan;
mod sweep;

pub use ansatz::{ansatz_circuit, encoded_ansatz_circuit, physical_ansatz_circuit, Family};
pub use curve::{potential_curve, CurvePoint, CHEMICAL_ACCURACY};
pub use hamiltonian::{energy, exact_ground_energy, CoefficientRow, CoefficientTable, Coefficients, Term, TermValues};
pub use mapping::{probe_score, score_mapping, PROBE_ANGLES};
pub use minimize::{minimize_energy, Minimum};
pub use noise_scan::{crossover, energy_error, noise_scan, NoiseScanPoint};
pub use sweep::{
    expectation_from_counts, run_sweep, theta_grid, Sampling, SweepConfig, SweepPoint, TermEstimates,
    DEFAULT_GRID_POINTS,
};
