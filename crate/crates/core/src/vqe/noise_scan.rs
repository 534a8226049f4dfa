use serde::Serialize;

use super::ansatz::Family;
use super::hamiltonian::Coefficients;
use super::minimize::minimize_energy;
use super::sweep::{run_sweep, SweepConfig};
use crate::error::{Error, Result};
use crate::noise::NoiseConfig;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseScanPoint<T> {
    pub p: T,
    pub error_physical: T,
    pub error_encoded: T,
}

/// `|E* − E_exact|` of one family in exact mode at noise level `p`.
pub fn energy_error<T: Real>(g: &Coefficients<T>, family: Family, p: T, grid_points: usize) -> Result<T> {
    let mut cfg = SweepConfig::exact(family, NoiseConfig::from_p(p));
    cfg.grid_points = grid_points;
    let est = run_sweep(&cfg)?;
    let energies: Vec<Option<T>> = est.points.iter().map(|pt| pt.terms.map(|t| g.energy(&t))).collect();
    let min = minimize_energy(&est.thetas(), &energies)
        .ok_or_else(|| Error::EmptyBranch(format!("no usable grid point at p={p}")))?;
    Ok((min.energy - g.exact_ground_energy()).abs())
}

/// Energy errors of both families for each `p` (sorted ascending).
pub fn noise_scan<T: Real>(g: &Coefficients<T>, ps: &[T], grid_points: usize) -> Result<Vec<NoiseScanPoint<T>>> {
    let mut ps = ps.to_vec();
    ps.sort_by(|a, b| a.partial_cmp(b).expect("finite noise levels"));
    ps.iter()
        .map(|&p| {
            Ok(NoiseScanPoint {
                p,
                error_physical: energy_error(g, Family::Physical, p, grid_points)?,
                error_encoded: energy_error(g, Family::Encoded, p, grid_points)?,
            })
        })
        .collect()
}

/// First noise level at which the encoded error exceeds the physical one,
/// linearly interpolated between the bracketing scan points.
pub fn crossover<T: Real>(scan: &[NoiseScanPoint<T>]) -> Option<T> {
    let diff = |s: &NoiseScanPoint<T>| s.error_encoded - s.error_physical;
    let k = scan.iter().position(|s| diff(s) > T::zero())?;
    if k == 0 {
        return Some(scan[0].p);
    }
    let (a, b) = (&scan[k - 1], &scan[k]);
    let (da, db) = (diff(a), diff(b));
    Some(a.p + (b.p - a.p) * (-da) / (db - da))
}
