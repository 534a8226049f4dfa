use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense outcome histogram over `n_bits`-bit strings. Tallies are real so
/// that unfolded (fractional) counts flow through the same type.
#[derive(Debug, Clone, PartialEq)]
pub struct Counts<T> {
    n_bits: usize,
    tallies: Vec<T>,
}

impl<T: Real> Counts<T> {
    pub fn zeros(n_bits: usize) -> Self {
        Self { n_bits, tallies: vec![T::zero(); 1 << n_bits] }
    }

    pub fn from_tallies(n_bits: usize, tallies: Vec<T>) -> Result<Self> {
        if tallies.len() != 1 << n_bits {
            return Err(Error::Format(format!(
                "{} tallies for {n_bits}-bit outcomes (expected {})",
                tallies.len(),
                1usize << n_bits
            )));
        }
        if tallies.iter().any(|t| *t < T::zero() || !t.is_finite()) {
            return Err(Error::Format("tallies must be finite and nonnegative".into()));
        }
        Ok(Self { n_bits, tallies })
    }

    /// Expected counts `shots · probs`.
    pub fn from_probabilities(probs: &[T], shots: T) -> Result<Self> {
        let n_bits = probs.len().trailing_zeros() as usize;
        Self::from_tallies(n_bits, probs.iter().map(|p| p.max(T::zero()) * shots).collect())
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn tallies(&self) -> &[T] {
        &self.tallies
    }

    pub fn get(&self, outcome: usize) -> T {
        self.tallies[outcome]
    }

    pub fn add(&mut self, outcome: usize, amount: T) {
        self.tallies[outcome] += amount;
    }

    pub fn merge(&mut self, other: &Self) {
        debug_assert_eq!(self.n_bits, other.n_bits);
        for (a, b) in self.tallies.iter_mut().zip(&other.tallies) {
            *a += *b;
        }
    }

    pub fn shots(&self) -> T {
        self.tallies.iter().copied().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.shots() <= T::zero()
    }

    /// Relative frequencies; `None` when no shot survived.
    pub fn normalized(&self) -> Option<Vec<T>> {
        let total = self.shots();
        (total > T::zero()).then(|| self.tallies.iter().map(|t| *t / total).collect())
    }

    /// Outcome rendered most-significant bit first, so qubit 0 is the last
    /// character.
    pub fn bitstring(&self, outcome: usize) -> String {
        (0..self.n_bits).rev().map(|b| if (outcome >> b) & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// Tolerance on probability-vector normalization and negativity.
pub const PROB_TOL: f64 = 1e-9;

/// Multinomial draw of `shots` outcomes from `probs`, deterministic in `seed`.
///
/// Implemented as a chain of conditional binomials so that the stream of
/// random numbers consumed depends only on `probs`, `shots` and `seed`.
pub fn sample_counts<T: Real>(probs: &[T], shots: u64, seed: u64) -> Result<Counts<T>> {
    if !probs.len().is_power_of_two() {
        return Err(Error::Size(format!("{} outcomes is not a power of two", probs.len())));
    }
    let tol = T::lit(PROB_TOL);
    if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| **p < -tol || !p.is_finite()) {
        return Err(Error::Probability(format!("entry {i} is {p}")));
    }
    let total: T = probs.iter().copied().sum();
    if (total - T::one()).abs() > tol {
        return Err(Error::Probability(format!("probabilities sum to {total}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Counts::zeros(probs.len().trailing_zeros() as usize);
    let mut remaining = shots;
    let mut mass_left = 1.0f64;
    let last = probs.len() - 1;
    for (i, p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.to_f64_lossy().max(0.0);
        let k = if i == last || p >= mass_left {
            remaining
        } else if p <= 0.0 {
            0
        } else {
            let q = (p / mass_left).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .map_err(|e| Error::Probability(e.to_string()))?
                .sample(&mut rng)
        };
        counts.tallies[i] = T::from_u64(k).expect("count fits scalar");
        remaining -= k;
        mass_left -= p;
    }
    Ok(counts)
}

/// Stable per-item seed derived from a master seed and an index.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the xor-combined input.
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
