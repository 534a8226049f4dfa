//! Depolarizing gate noise and asymmetric readout error.
//!
//! The depolarizing channels use the twirl identity
//! `(1/4ᵏ) Σ_P P ρ P† = I/2ᵏ ⊗ Tr_sub(ρ)` over the k affected qubits, which
//! keeps each application at `O(4ⁿ)` instead of a 4ᵏ-term sum.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{sample_counts, substream_seed, Circuit, DensityState, Gate, GateKind, Relabel};

/// Gate-noise rates: `p2` after every CNOT, `p1` after every single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig<T> {
    pub p1: T,
    pub p2: T,
}

impl<T: Real> NoiseConfig<T> {
    /// Single-parameter model: `p2 = p`, `p1 = p / 16`.
    pub fn from_p(p: T) -> Self {
        Self { p1: p / T::lit(16.0), p2: p }
    }

    pub fn noiseless() -> Self {
        Self { p1: T::zero(), p2: T::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: T| x >= T::zero() && x <= T::one();
        if ok(self.p1) && ok(self.p2) {
            Ok(())
        } else {
            Err(Error::Probability(format!("noise rates p1={} p2={} outside [0,1]", self.p1, self.p2)))
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == T::zero() && self.p2 == T::zero()
    }
}

fn check_rate<T: Real>(p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::Probability(format!("depolarizing rate {p} outside [0,1]")))
    }
}

/// `ρ → (1−p)ρ + (p/4) Σ_{E∈{I,X,Y,Z}} E ρ E†` on `qubit`.
pub fn depolarize1<T: Real>(state: &mut DensityState<T>, qubit: usize, p: T) -> Result<()> {
    check_rate(p)?;
    if qubit >= state.n_qubits() {
        return Err(Error::Target(format!("qubit {qubit} out of range")));
    }
    twirl(state, 1 << qubit, p);
    Ok(())
}

/// `ρ → (1−p)ρ + (p/16) Σ_{E,F} (E⊗F) ρ (E⊗F)†` on qubits `i`, `j`.
pub fn depolarize2<T: Real>(state: &mut DensityState<T>, i: usize, j: usize, p: T) -> Result<()> {
    check_rate(p)?;
    if i == j {
        return Err(Error::Target(format!("two-qubit channel on a single qubit {i}")));
    }
    if i.max(j) >= state.n_qubits() {
        return Err(Error::Target(format!("qubit {} out of range", i.max(j))));
    }
    twirl(state, (1 << i) | (1 << j), p);
    Ok(())
}

/// Full depolarization of the qubits in `mask`, mixed with weight `p`.
fn twirl<T: Real>(state: &mut DensityState<T>, mask: usize, p: T) {
    if p == T::zero() {
        return;
    }
    let dim = state.dim();
    let k = mask.count_ones() as usize;
    let sub: Vec<usize> = (0..1usize << k).map(|v| scatter(v, mask)).collect();
    let keep = T::one() - p;
    let share = p / T::from_usize_lossy(1 << k);
    let data = state.as_mut_slice();
    for i in (0..dim).filter(|i| i & mask == 0) {
        for j in (0..dim).filter(|j| j & mask == 0) {
            // Partial trace over the masked qubits for the (i, j) block.
            let traced = sub
                .iter()
                .map(|&s| data[(i | s) * dim + (j | s)])
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
            for &a in &sub {
                for &b in &sub {
                    let idx = (i | a) * dim + (j | b);
                    data[idx] *= keep;
                }
                let idx = (i | a) * dim + (j | a);
                data[idx] += traced * share;
            }
        }
    }
}

/// Spreads the low bits of `v` over the set bits of `mask`.
fn scatter(v: usize, mask: usize) -> usize {
    let mut out = 0;
    let mut bit = 0;
    for q in 0..usize::BITS as usize {
        if mask >> q & 1 == 1 {
            out |= ((v >> bit) & 1) << q;
            bit += 1;
        }
    }
    out
}

/// Runs `circuit` from `|0…0⟩`, following every gate with its channel.
/// Relabelings are bookkeeping only and never incur noise.
pub fn run_noisy<T: Real>(circuit: &Circuit<T>, noise: &NoiseConfig<T>) -> Result<DensityState<T>> {
    noise.validate()?;
    let mut state = DensityState::zero(circuit.n_qubits())?;
    for gate in circuit.ops() {
        state.apply_gate(gate)?;
        match gate.kind {
            GateKind::Cnot => depolarize2(&mut state, gate.targets[0], gate.targets[1], noise.p2)?,
            _ => depolarize1(&mut state, gate.targets[0], noise.p1)?,
        }
    }
    Ok(state)
}

/// Per-qubit readout flip probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutError<T> {
    /// Pr(read 1 | true 0).
    pub e01: T,
    /// Pr(read 0 | true 1).
    pub e10: T,
}

impl<T: Real> ReadoutError<T> {
    /// Typical superconducting-qubit asymmetry: decay during readout makes
    /// `1 → 0` more likely than `0 → 1`.
    pub fn default_asymmetric() -> Self {
        Self { e01: T::lit(0.01), e10: T::lit(0.05) }
    }

    /// 2×2 confusion matrix `[[1−e01, e10], [e01, 1−e10]]`.
    pub fn confusion(&self) -> [[T; 2]; 2] {
        [[T::one() - self.e01, self.e10], [self.e01, T::one() - self.e10]]
    }
}

/// Independent readout errors, one pair per qubit (index = qubit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel<T> {
    pub qubits: Vec<ReadoutError<T>>,
}

impl<T: Real> ReadoutModel<T> {
    pub fn uniform(n: usize, err: ReadoutError<T>) -> Self {
        Self { qubits: vec![err; n] }
    }

    pub fn ideal(n: usize) -> Self {
        Self::uniform(n, ReadoutError { e01: T::zero(), e10: T::zero() })
    }

    pub fn default_asymmetric(n: usize) -> Self {
        Self::uniform(n, ReadoutError::default_asymmetric())
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: T| x >= T::zero() && x <= T::one();
        match self.qubits.iter().position(|e| !ok(e.e01) || !ok(e.e10)) {
            None => Ok(()),
            Some(q) => Err(Error::Probability(format!("readout rates of qubit {q} outside [0,1]"))),
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.qubits.len() == n {
            Ok(())
        } else {
            Err(Error::Size(format!("readout model has {} qubits, data has {n}", self.qubits.len())))
        }
    }
}

/// `R · probs` with `R` the tensor product of per-qubit confusion matrices,
/// applied one qubit at a time.
pub fn apply_readout<T: Real>(probs: &[T], model: &ReadoutModel<T>) -> Result<Vec<T>> {
    let n = probs.len().trailing_zeros() as usize;
    if !probs.len().is_power_of_two() {
        return Err(Error::Size(format!("{} outcomes is not a power of two", probs.len())));
    }
    model.check_len(n)?;
    model.validate()?;
    let mut out = probs.to_vec();
    for (q, err) in model.qubits.iter().enumerate() {
        let c = err.confusion();
        let bit = 1usize << q;
        for i0 in (0..out.len()).filter(|i| i & bit == 0) {
            let (a, b) = (out[i0], out[i0 | bit]);
            out[i0] = c[0][0] * a + c[0][1] * b;
            out[i0 | bit] = c[1][0] * a + c[1][1] * b;
        }
    }
    Ok(out)
}

/// Column-stochastic readout response: `R[i][j] = Pr(measure i | truth j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> ResponseMatrix<T> {
    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut data = vec![T::zero(); dim * dim];
        (0..dim).for_each(|i| data[i * dim + i] = T::one());
        Self { dim, data }
    }

    /// From row-major entries; checks shape, range and column sums.
    pub fn from_rows(dim: usize, data: Vec<T>) -> Result<Self> {
        if !dim.is_power_of_two() || data.len() != dim * dim {
            return Err(Error::Format(format!("response matrix needs {dim}×{dim} entries, got {}", data.len())));
        }
        let m = Self { dim, data };
        m.check_stochastic(T::lit(1e-9))?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, measured: usize, truth: usize) -> T {
        self.data[measured * self.dim + truth]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim)
    }

    pub fn check_stochastic(&self, tol: T) -> Result<()> {
        if self.data.iter().any(|x| *x < T::zero() || *x > T::one() || !x.is_finite()) {
            return Err(Error::Probability("response entries must lie in [0,1]".into()));
        }
        for j in 0..self.dim {
            let s: T = (0..self.dim).map(|i| self.get(i, j)).sum();
            if (s - T::one()).abs() > tol {
                return Err(Error::Probability(format!("response column {j} sums to {s}")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, truth: &[T]) -> Vec<T> {
        self.rows().map(|row| row.iter().zip(truth).map(|(r, t)| *r * *t).sum()).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max)
    }
}

/// Exact tensor-product response matrix of `model` on `n` qubits.
pub fn build_response<T: Real>(model: &ReadoutModel<T>, n: usize) -> Result<ResponseMatrix<T>> {
    model.check_len(n)?;
    model.validate()?;
    let dim = 1usize << n;
    let mut data = vec![T::zero(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            data[i * dim + j] = model
                .qubits
                .iter()
                .enumerate()
                .map(|(q, e)| e.confusion()[(i >> q) & 1][(j >> q) & 1])
                .fold(T::one(), |a, b| a * b);
        }
    }
    Ok(ResponseMatrix { dim, data })
}

/// Empirical response matrix from the `2ⁿ` calibration circuits: basis
/// state `j` is prepared with X gates, read out through `model`, and
/// sampled with `shots` shots (substream seed derived from `seed` and `j`).
pub fn calibrate_response<T: Real>(
    model: &ReadoutModel<T>,
    n: usize,
    shots: u64,
    seed: u64,
) -> Result<ResponseMatrix<T>> {
    if shots == 0 {
        return Err(Error::Size("calibration needs at least one shot".into()));
    }
    model.check_len(n)?;
    let dim = 1usize << n;
    let mut data = vec![T::zero(); dim * dim];
    let total = T::from_u64(shots).expect("shots fit scalar");
    for j in 0..dim {
        let mut circuit = Circuit::new(n);
        circuit.extend((0..n).filter(|q| (j >> q) & 1 == 1).map(Gate::x))?;
        let truth = circuit.run()?.probabilities(&Relabel::identity(n))?;
        let measured = apply_readout(&truth, model)?;
        let counts = sample_counts(&measured, shots, substream_seed(seed, j as u64))?;
        for (i, c) in counts.tallies().iter().enumerate() {
            data[i * dim + j] = *c / total;
        }
    }
    Ok(ResponseMatrix { dim, data })
}
