//! Noisy simulation of a two-qubit VQE for H₂, bare and protected by the
//! [[4,2,2]] error-detecting code, with readout-error unfolding.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod code422;
pub mod error;
pub mod io;
pub mod noise;
pub mod scalar;
pub mod sim;
pub mod unfold;
pub mod vqe;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Density = sim::DensityState<f64>;
pub type Circuit = sim::Circuit<f64>;
pub type Gate = sim::Gate<f64>;
pub type Counts = sim::Counts<f64>;
pub type Noise = noise::NoiseConfig<f64>;
pub type Readout = noise::ReadoutModel<f64>;
pub type Response = noise::ResponseMatrix<f64>;
pub type Spectrum = unfold::Spectrum<f64>;
pub type Table = vqe::CoefficientTable<f64>;
pub type Sweep = vqe::TermEstimates<f64>;
pub type SweepSettings = vqe::SweepConfig<f64>;
