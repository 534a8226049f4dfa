use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ansatz::{ansatz_circuit, Family};
use super::hamiltonian::{Term, TermValues};
use crate::code422::{self, DiscardStats};
use crate::error::{Error, Result};
use crate::noise::{apply_readout, build_response, calibrate_response, run_noisy, NoiseConfig, ReadoutModel, ResponseMatrix};
use crate::scalar::Real;
use crate::sim::{sample_counts, substream_seed, Counts, MeasBasis, Relabel};
use crate::unfold::{correct_counts, UnfoldSettings};

/// Number of θ points used by default (both endpoints included).
pub const DEFAULT_GRID_POINTS: usize = 257;

/// `n` evenly spaced angles from −π to π inclusive.
pub fn theta_grid<T: Real>(n: usize) -> Result<Vec<T>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Size(format!("grid needs an odd number ≥ 3 of points, got {n}")));
    }
    let step = T::lit(2.0) * T::PI() / T::from_usize_lossy(n - 1);
    Ok((0..n).map(|j| if j == n - 1 { T::PI() } else { -T::PI() + step * T::from_usize_lossy(j) }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Sampling {
    /// Outcome probabilities are used directly.
    Exact,
    /// Multinomial sampling; substream seeds derive from `seed`.
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig<T> {
    pub family: Family,
    pub grid_points: usize,
    pub noise: NoiseConfig<T>,
    /// Readout model over all measured qubits of the family.
    pub readout: Option<ReadoutModel<T>>,
    /// Unfold readout errors before decoding (requires `readout`).
    pub unfold: Option<UnfoldSettings>,
    /// Estimate the response matrix from sampled calibration circuits
    /// instead of using the model's exact response (shot mode only).
    pub calibration_shots: Option<u64>,
    pub sampling: Sampling,
    /// Fold the a2 = 1 branch into the θ + π rows (encoded family only).
    pub merge_branches: bool,
}

impl<T: Real> SweepConfig<T> {
    pub fn exact(family: Family, noise: NoiseConfig<T>) -> Self {
        Self {
            family,
            grid_points: DEFAULT_GRID_POINTS,
            noise,
            readout: None,
            unfold: None,
            calibration_shots: None,
            sampling: Sampling::Exact,
            merge_branches: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        theta_grid::<T>(self.grid_points)?;
        self.noise.validate()?;
        if let Some(r) = &self.readout {
            r.validate()?;
            if r.n_qubits() != self.family.n_qubits() {
                return Err(Error::Size(format!(
                    "readout model covers {} qubits, {} circuits measure {}",
                    r.n_qubits(),
                    self.family,
                    self.family.n_qubits()
                )));
            }
        }
        if let Some(u) = &self.unfold {
            u.validate()?;
            if self.readout.is_none() {
                return Err(Error::Format("unfolding requires a readout model".into()));
            }
        }
        if let Sampling::Shots { shots: 0, .. } = self.sampling {
            return Err(Error::Size("shot mode needs at least one shot".into()));
        }
        Ok(())
    }
}

/// Estimates at one grid angle.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub theta: T,
    /// `None` when postselection left nothing in either basis.
    pub terms: Option<TermValues<T>>,
    /// Binomial standard errors (zero in exact mode).
    pub sigma: Option<TermValues<T>>,
    /// Raw (pre-unfolding) decode tallies of the Z- and X-basis circuits run
    /// at this angle; all kept for the physical family.
    pub stats_z: DiscardStats,
    pub stats_x: DiscardStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermEstimates<T> {
    pub family: Family,
    pub points: Vec<SweepPoint<T>>,
}

impl<T: Real> TermEstimates<T> {
    pub fn thetas(&self) -> Vec<T> {
        self.points.iter().map(|p| p.theta).collect()
    }

    /// Grid indices whose postselected histograms were empty.
    pub fn empty_points(&self) -> Vec<usize> {
        self.points.iter().enumerate().filter(|(_, p)| p.terms.is_none()).map(|(i, _)| i).collect()
    }
}

/// `Σ ±freq` with the sign of `term` on logical 2-bit counts (bit 0 = b1).
/// `X1X2` is read as the parity of counts taken in the rotated basis.
pub fn expectation_from_counts<T: Real>(counts: &Counts<T>, term: Term) -> Result<T> {
    if counts.n_bits() != 2 {
        return Err(Error::Format(format!("expected 2-bit logical counts, got {} bits", counts.n_bits())));
    }
    let freq = counts.normalized().ok_or_else(|| Error::EmptyBranch("no shots to average".into()))?;
    let sign = |i: usize| -> T {
        let odd = match term {
            Term::Z1 => i & 1,
            Term::Z2 => (i >> 1) & 1,
            Term::Z1Z2 | Term::X1X2 => (i ^ (i >> 1)) & 1,
        };
        if odd == 1 { -T::one() } else { T::one() }
    };
    Ok(freq.iter().enumerate().map(|(i, f)| sign(i) * *f).sum())
}

/// Logical histograms of one circuit, split by rotation branch.
struct CircuitOutcome<T> {
    kept: Counts<T>,
    kept_pi: Counts<T>,
    raw_kept: T,
    raw_kept_pi: T,
    stats: DiscardStats,
}

struct Pipeline<'a, T> {
    cfg: &'a SweepConfig<T>,
    response: Option<ResponseMatrix<T>>,
}

impl<T: Real> Pipeline<'_, T> {
    fn run_circuit(&self, theta: T, basis: MeasBasis, stream: u64) -> Result<CircuitOutcome<T>> {
        let cfg = self.cfg;
        let n = cfg.family.n_qubits();
        let circuit = ansatz_circuit(cfg.family, theta, basis);
        let mut probs = run_noisy(&circuit, &cfg.noise)?.probabilities(&Relabel::identity(n))?;
        if let Some(model) = &cfg.readout {
            probs = apply_readout(&probs, model)?;
        }
        let raw = match cfg.sampling {
            Sampling::Exact => Counts::from_tallies(n, probs)?,
            Sampling::Shots { shots, seed } => sample_counts(&probs, shots, substream_seed(seed, stream))?,
        };
        let corrected = match (&self.response, &cfg.unfold) {
            (Some(r), Some(settings)) => correct_counts(&raw, r, settings)?.0,
            _ => raw.clone(),
        };
        match cfg.family {
            Family::Physical => {
                let total = raw.shots();
                let stats = DiscardStats {
                    shots_in: total.to_f64_lossy(),
                    kept_theta: total.to_f64_lossy(),
                    ..Default::default()
                };
                Ok(CircuitOutcome { kept: corrected, kept_pi: Counts::zeros(2), raw_kept: total, raw_kept_pi: T::zero(), stats })
            }
            Family::Encoded => {
                let raw_dec = code422::decode_counts(&raw, circuit.relabel())?;
                let dec = code422::decode_counts(&corrected, circuit.relabel())?;
                Ok(CircuitOutcome {
                    kept: dec.kept_theta,
                    kept_pi: dec.kept_theta_pi,
                    raw_kept: raw_dec.kept_theta.shots(),
                    raw_kept_pi: raw_dec.kept_theta_pi.shots(),
                    stats: raw_dec.stats(),
                })
            }
        }
    }
}

/// Runs the Z- and X-basis circuits at every grid angle and turns the
/// (decoded, postselected) histograms into term estimates.
///
/// For the encoded family the a2 = 1 branch of the circuit at θ samples the
/// ansatz at θ + π; its histogram is added to the grid rows at that angle
/// (the grid step divides π, and −π and π are the same angle).
pub fn run_sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<TermEstimates<T>> {
    cfg.validate()?;
    let thetas = theta_grid::<T>(cfg.grid_points)?;
    let response = match (&cfg.readout, &cfg.unfold, cfg.sampling, cfg.calibration_shots) {
        (Some(model), Some(_), Sampling::Shots { seed, .. }, Some(cal)) => {
            Some(calibrate_response(model, model.n_qubits(), cal, substream_seed(seed, u64::MAX))?)
        }
        (Some(model), Some(_), _, _) => Some(build_response(model, model.n_qubits())?),
        _ => None,
    };
    let pipeline = Pipeline { cfg, response };
    let outcomes: Vec<[CircuitOutcome<T>; 2]> = thetas
        .par_iter()
        .enumerate()
        .map(|(j, &theta)| {
            let z = pipeline.run_circuit(theta, MeasBasis::Z, 2 * j as u64)?;
            let x = pipeline.run_circuit(theta, MeasBasis::X, 2 * j as u64 + 1)?;
            Ok([z, x])
        })
        .collect::<Result<_>>()?;

    let unique = cfg.grid_points - 1;
    let half = unique / 2;
    let exact = cfg.sampling == Sampling::Exact;
    let points = thetas
        .iter()
        .enumerate()
        .map(|(j, &theta)| {
            let u = j % unique;
            // Circuits whose shifted branch lands on this angle.
            let donors: Vec<usize> = (0..cfg.grid_points).filter(|k| (k % unique + half) % unique == u).collect();
            let merged = |b: usize| {
                let own = &outcomes[j][b];
                let mut counts = own.kept.clone();
                let mut raw = own.raw_kept;
                if cfg.family == Family::Encoded && cfg.merge_branches {
                    for &k in &donors {
                        counts.merge(&outcomes[k][b].kept_pi);
                        raw += outcomes[k][b].raw_kept_pi;
                    }
                }
                (counts, raw)
            };
            let (cz, nz) = merged(0);
            let (cx, nx) = merged(1);
            let (terms, sigma) = if cz.is_empty() || cx.is_empty() || nz <= T::zero() || nx <= T::zero() {
                (None, None)
            } else {
                let t = TermValues {
                    z1: expectation_from_counts(&cz, Term::Z1)?,
                    z2: expectation_from_counts(&cz, Term::Z2)?,
                    z1z2: expectation_from_counts(&cz, Term::Z1Z2)?,
                    x1x2: expectation_from_counts(&cx, Term::X1X2)?,
                };
                let s = |v: T, n: T| if exact { T::zero() } else { ((T::one() - v * v).max(T::zero()) / n).sqrt() };
                let sigma = TermValues { z1: s(t.z1, nz), z2: s(t.z2, nz), z1z2: s(t.z1z2, nz), x1x2: s(t.x1x2, nx) };
                (Some(t), Some(sigma))
            };
            Ok(SweepPoint { theta, terms, sigma, stats_z: outcomes[j][0].stats, stats_x: outcomes[j][1].stats })
        })
        .collect::<Result<_>>()?;
    Ok(TermEstimates { family: cfg.family, points })
}
