use serde::Serialize;

use super::hamiltonian::CoefficientTable;
use super::minimize::minimize_energy;
use super::sweep::TermEstimates;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint<T> {
    pub r: T,
    pub theta_star: T,
    pub energy: T,
    pub energy_exact: T,
    pub delta: T,
}

impl<T: Real> CurvePoint<T> {
    pub fn chemically_accurate(&self) -> bool {
        self.delta.abs() < T::lit(CHEMICAL_ACCURACY)
    }
}

/// Minimizes the energy of every table row over the same set of term
/// estimates; the terms do not depend on the coefficients.
pub fn potential_curve<T: Real>(table: &CoefficientTable<T>, sweep: &TermEstimates<T>) -> Result<Vec<CurvePoint<T>>> {
    let thetas = sweep.thetas();
    table
        .rows()
        .iter()
        .map(|row| {
            let energies: Vec<Option<T>> = sweep.points.iter().map(|p| p.terms.map(|t| row.g.energy(&t))).collect();
            let min = minimize_energy(&thetas, &energies)
                .ok_or_else(|| Error::EmptyBranch("every grid point of the sweep is empty".into()))?;
            let exact = row.g.exact_ground_energy();
            Ok(CurvePoint { r: row.r, theta_star: min.theta, energy: min.energy, energy_exact: exact, delta: min.energy - exact })
        })
        .collect()
}
