use std::f64::consts::FRAC_PI_4;

use super::sweep::{run_sweep, SweepConfig};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Angles at which a mapping's `⟨X1X2⟩` is compared with the exact value.
pub const PROBE_ANGLES: [f64; 7] = [
    -3.0 * FRAC_PI_4,
    -2.0 * FRAC_PI_4,
    -FRAC_PI_4,
    0.0,
    FRAC_PI_4,
    2.0 * FRAC_PI_4,
    3.0 * FRAC_PI_4,
];

/// L1 distance between probe estimates and exact values.
pub fn score_mapping<T: Real>(estimates: &[T], exact: &[T]) -> Result<T> {
    if estimates.len() != PROBE_ANGLES.len() || exact.len() != PROBE_ANGLES.len() {
        return Err(Error::Format(format!(
            "need {} probe values each, got {} estimates and {} exact values",
            PROBE_ANGLES.len(),
            estimates.len(),
            exact.len()
        )));
    }
    Ok(estimates.iter().zip(exact).map(|(a, b)| (*a - *b).abs()).sum())
}

/// `⟨X1X2⟩` at the probe angles under `cfg` (its grid size is replaced by
/// the 9-point grid containing them), scored against `sin θ`.
pub fn probe_score<T: Real>(cfg: &SweepConfig<T>) -> Result<T> {
    let mut cfg = cfg.clone();
    cfg.grid_points = PROBE_ANGLES.len() + 2;
    let est = run_sweep(&cfg)?;
    let probes = &est.points[1..=PROBE_ANGLES.len()];
    let values = probes
        .iter()
        .map(|p| p.terms.map(|t| t.x1x2).ok_or_else(|| Error::EmptyBranch(format!("probe at θ={} is empty", p.theta))))
        .collect::<Result<Vec<T>>>()?;
    let exact: Vec<T> = PROBE_ANGLES.iter().map(|a| T::lit(*a).sin()).collect();
    score_mapping(&values, &exact)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_examples() {
        let exact: Vec<f64> = PROBE_ANGLES.iter().map(|a| a.sin()).collect();
        assert_eq!(score_mapping(&exact, &exact).unwrap(), 0.0);
        let off: Vec<f64> = exact.iter().map(|x| x + 0.1).collect();
        assert!((score_mapping(&off, &exact).unwrap() - 0.7).abs() < 1e-12);
        assert!(matches!(score_mapping(&exact[..6], &exact), Err(Error::Format(_))));
    }
}
