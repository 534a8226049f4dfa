//! Iterative Bayesian unfolding of measured spectra through a readout
//! response matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::ResponseMatrix;
use crate::scalar::Real;
use crate::sim::{Counts, PROB_TOL};

/// Probability vector over `2ⁿ` bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T>(Vec<T>);

impl<T: Real> Spectrum<T> {
    pub fn new(p: Vec<T>) -> Result<Self> {
        if !p.len().is_power_of_two() {
            return Err(Error::Size(format!("spectrum of length {}", p.len())));
        }
        let tol = T::lit(PROB_TOL);
        if p.iter().any(|x| *x < T::zero() || !x.is_finite()) {
            return Err(Error::Probability("spectrum entries must be nonnegative".into()));
        }
        let total: T = p.iter().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::Probability(format!("spectrum sums to {total}")));
        }
        Ok(Self(p))
    }

    pub fn uniform(dim: usize) -> Self {
        Self(vec![T::one() / T::from_usize_lossy(dim); dim])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn l1(&self, other: &[T]) -> T {
        l1(&self.0, other)
    }
}

pub fn l1<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).sum()
}

/// One update `t'ᵢ = Σⱼ Rⱼᵢ tᵢ mⱼ / Σₖ Rⱼₖ tₖ`.
pub fn ibu_step<T: Real>(r: &ResponseMatrix<T>, m: &Spectrum<T>, t: &Spectrum<T>) -> Result<Spectrum<T>> {
    let dim = r.dim();
    if m.len() != dim || t.len() != dim {
        return Err(Error::Size(format!("response is {dim}×{dim}, spectra have {} and {}", m.len(), t.len())));
    }
    let folded = r.apply(t.as_slice());
    let mut next = vec![T::zero(); dim];
    for (j, (&mj, &fj)) in m.as_slice().iter().zip(&folded).enumerate() {
        if mj == T::zero() {
            continue;
        }
        if fj <= T::zero() {
            return Err(Error::Support { bin: j, mass: mj.to_f64_lossy() });
        }
        let w = mj / fj;
        for (i, ti) in t.as_slice().iter().enumerate() {
            next[i] += r.get(j, i) * *ti * w;
        }
    }
    // Exact arithmetic keeps unit mass; renormalize away rounding drift.
    let total: T = next.iter().copied().sum();
    next.iter_mut().for_each(|x| *x /= total);
    Ok(Spectrum(next))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prior<T> {
    Uniform,
    Given(Spectrum<T>),
}

/// Iteration controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnfoldSettings {
    pub max_iters: usize,
    /// Stop once the L1 change of one step drops below this.
    pub tol: f64,
}

impl Default for UnfoldSettings {
    fn default() -> Self {
        Self { max_iters: 1000, tol: 1e-6 }
    }
}

impl UnfoldSettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 || !(self.tol > 0.0) {
            return Err(Error::Size(format!("max_iters={} tol={} invalid", self.max_iters, self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Unfolded<T> {
    pub spectrum: Spectrum<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Iterates [`ibu_step`] from `prior` until the step size falls below
/// `settings.tol` or `settings.max_iters` steps were taken.
pub fn unfold<T: Real>(
    r: &ResponseMatrix<T>,
    m: &Spectrum<T>,
    prior: Prior<T>,
    settings: &UnfoldSettings,
) -> Result<Unfolded<T>> {
    unfold_with(r, m, prior, settings, |_| {})
}

/// As [`unfold`], calling `observe` on every iterate.
pub fn unfold_with<T: Real>(
    r: &ResponseMatrix<T>,
    m: &Spectrum<T>,
    prior: Prior<T>,
    settings: &UnfoldSettings,
    mut observe: impl FnMut(&Spectrum<T>),
) -> Result<Unfolded<T>> {
    settings.validate()?;
    let tol = T::lit(settings.tol);
    let mut t = match prior {
        Prior::Uniform => Spectrum::uniform(r.dim()),
        Prior::Given(p) => p,
    };
    for it in 1..=settings.max_iters {
        let next = ibu_step(r, m, &t)?;
        observe(&next);
        let step = next.l1(t.as_slice());
        t = next;
        if step < tol {
            return Ok(Unfolded { spectrum: t, iterations: it, converged: true });
        }
    }
    Ok(Unfolded { spectrum: t, iterations: settings.max_iters, converged: false })
}

/// Unfolds a histogram and rescales to the original shot total. Tallies of
/// the result are real-valued.
pub fn correct_counts<T: Real>(
    counts: &Counts<T>,
    r: &ResponseMatrix<T>,
    settings: &UnfoldSettings,
) -> Result<(Counts<T>, Unfolded<T>)> {
    if counts.n_bits() != r.n_qubits() {
        return Err(Error::Size(format!("{}-bit counts, {}-qubit response", counts.n_bits(), r.n_qubits())));
    }
    let shots = counts.shots();
    let m = counts
        .normalized()
        .ok_or_else(|| Error::EmptyBranch("cannot unfold an empty histogram".into()))?;
    let res = unfold(r, &Spectrum::new(m)?, Prior::Uniform, settings)?;
    let scaled = res.spectrum.as_slice().iter().map(|p| *p * shots).collect();
    Ok((Counts::from_tallies(counts.n_bits(), scaled)?, res))
}
