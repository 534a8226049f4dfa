use num_complex::Complex;

use super::gate::{Gate, GateKind, Pauli};
use super::relabel::Relabel;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_QUBITS: usize = 12;

/// Dense density matrix over `n` qubits, row-major, qubit 0 is the
/// least-significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState<T> {
    n_qubits: usize,
    data: Vec<Complex<T>>,
}

fn check_size(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::Size(format!("qubit count {n} outside 1..={MAX_QUBITS}")))
    }
}

impl<T: Real> DensityState<T> {
    /// `|0…0⟩⟨0…0|`.
    pub fn zero(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        data[0] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits: n, data })
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector of length `2ⁿ`.
    pub fn from_pure(amplitudes: &[Complex<T>]) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::Size(format!("amplitude length {dim} is not a power of two")));
        }
        let n = dim.trailing_zeros() as usize;
        check_size(n)?;
        let mut data = Vec::with_capacity(dim * dim);
        for a in amplitudes {
            for b in amplitudes {
                data.push(*a * b.conj());
            }
        }
        Ok(Self { n_qubits: n, data })
    }

    /// Wraps a raw row-major matrix. Dimension must be `2ⁿ × 2ⁿ`.
    pub fn from_matrix(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        if data.len() != dim * dim {
            return Err(Error::Size(format!("expected {} entries, got {}", dim * dim, data.len())));
        }
        Ok(Self { n_qubits: n, data })
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        let dim = s.dim();
        let w = T::one() / T::from_usize_lossy(dim);
        s.data.iter_mut().for_each(|z| *z = Complex::new(T::zero(), T::zero()));
        for i in 0..dim {
            s.data[i * dim + i] = Complex::new(w, T::zero());
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim() + col]
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex<T> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> T {
        // ρ is Hermitian, so Tr(ρ²) = Σ |ρ_ij|².
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> T {
        let dim = self.dim();
        let mut worst = T::zero();
        for i in 0..dim {
            for j in i..dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.n_qubits {
            Ok(())
        } else {
            Err(Error::Target(format!("qubit {q} out of range for {} qubits", self.n_qubits)))
        }
    }

    /// `ρ → U ρ U†` for the gate embedded at its targets.
    pub fn apply_gate(&mut self, gate: &Gate<T>) -> Result<()> {
        for &q in &gate.targets {
            self.check_qubit(q)?;
        }
        match gate.kind {
            GateKind::Cnot => {
                let (c, t) = (gate.targets[0], gate.targets[1]);
                if c == t {
                    return Err(Error::Target(format!("CNOT control and target are both {c}")));
                }
                self.apply_cnot(c, t);
            }
            _ => {
                let u = gate.single_matrix().expect("single-qubit kind");
                self.apply_single(gate.targets[0], &u);
            }
        }
        Ok(())
    }

    /// Conjugates by a 2×2 unitary on qubit `q`. Caller guarantees `q` is valid.
    pub(crate) fn apply_single(&mut self, q: usize, u: &[[Complex<T>; 2]; 2]) {
        let dim = self.dim();
        let bit = 1usize << q;
        let data = &mut self.data;
        // Left multiply: rows i0 / i1 = i0 | bit.
        for i0 in (0..dim).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            for col in 0..dim {
                let a = data[i0 * dim + col];
                let b = data[i1 * dim + col];
                data[i0 * dim + col] = u[0][0] * a + u[0][1] * b;
                data[i1 * dim + col] = u[1][0] * a + u[1][1] * b;
            }
        }
        // Right multiply by U†.
        let uc = [[u[0][0].conj(), u[0][1].conj()], [u[1][0].conj(), u[1][1].conj()]];
        for row in 0..dim {
            let base = row * dim;
            for c0 in (0..dim).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let a = data[base + c0];
                let b = data[base + c1];
                data[base + c0] = a * uc[0][0] + b * uc[0][1];
                data[base + c1] = a * uc[1][0] + b * uc[1][1];
            }
        }
    }

    pub(crate) fn apply_cnot(&mut self, control: usize, target: usize) {
        let dim = self.dim();
        let (cb, tb) = (1usize << control, 1usize << target);
        let perm = |i: usize| if i & cb != 0 { i ^ tb } else { i };
        let old = self.data.clone();
        for i in 0..dim {
            let pi = perm(i);
            for j in 0..dim {
                self.data[i * dim + j] = old[pi * dim + perm(j)];
            }
        }
    }

    /// Conjugates by a single Pauli on qubit `q`.
    pub fn apply_pauli(&mut self, q: usize, p: Pauli) -> Result<()> {
        self.check_qubit(q)?;
        if p != Pauli::I {
            self.apply_single(q, &p.matrix());
        }
        Ok(())
    }

    /// `Tr(ρ P)` for a Pauli string given as `(qubit, Pauli)` pairs.
    pub fn expectation(&self, string: &[(usize, Pauli)]) -> Result<T> {
        let mut xmask = 0usize;
        for &(q, p) in string {
            self.check_qubit(q)?;
            if p.flips() {
                xmask ^= 1 << q;
            }
        }
        let dim = self.dim();
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..dim {
            // P|k⟩ = phase(k) |k ⊕ xmask⟩, so Tr(Pρ) = Σ_k phase(k) ρ[k][k ⊕ xmask].
            let mut phase = Complex::new(T::one(), T::zero());
            for &(q, p) in string {
                let bit = (k >> q) & 1 == 1;
                let sign = if bit { -T::one() } else { T::one() };
                phase *= match p {
                        Pauli::I | Pauli::X => Complex::new(T::one(), T::zero()),
                        Pauli::Z => Complex::new(sign, T::zero()),
                        Pauli::Y => Complex::new(T::zero(), sign),
                    };
            }
            acc += phase * self.get(k, k ^ xmask);
        }
        Ok(acc.re)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with_pure(&self, psi: &[Complex<T>]) -> Result<T> {
        let dim = self.dim();
        if psi.len() != dim {
            return Err(Error::Size(format!("state vector length {} != {dim}", psi.len())));
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..dim {
            for j in 0..dim {
                acc += psi[i].conj() * self.get(i, j) * psi[j];
            }
        }
        Ok(acc.re)
    }

    /// Reduced state on `keep` (in the given order: `keep[0]` becomes qubit 0).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        for &q in keep {
            self.check_qubit(q)?;
        }
        let m = keep.len();
        check_size(m)?;
        let traced: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        let sub = 1usize << m;
        let env = 1usize << traced.len();
        let embed = |k: usize, e: usize| {
            let mut idx = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                idx |= ((k >> pos) & 1) << q;
            }
            for (pos, &q) in traced.iter().enumerate() {
                idx |= ((e >> pos) & 1) << q;
            }
            idx
        };
        let mut data = vec![Complex::new(T::zero(), T::zero()); sub * sub];
        for a in 0..sub {
            for b in 0..sub {
                let mut acc = Complex::new(T::zero(), T::zero());
                for e in 0..env {
                    acc += self.get(embed(a, e), embed(b, e));
                }
                data[a * sub + b] = acc;
            }
        }
        Ok(Self { n_qubits: m, data })
    }

    /// Diagonal of ρ reindexed through `relabel`: bit `k` of the output index
    /// is physical qubit `relabel[k]`. Entries are clamped at zero and the
    /// vector is renormalized to unit sum.
    pub fn probabilities(&self, relabel: &Relabel) -> Result<Vec<T>> {
        if relabel.len() != self.n_qubits {
            return Err(Error::Size(format!(
                "relabel has {} entries for {} qubits",
                relabel.len(),
                self.n_qubits
            )));
        }
        let dim = self.dim();
        let mut out = vec![T::zero(); dim];
        for i in 0..dim {
            out[relabel.physical_to_label_index(i)] = self.get(i, i).re.max(T::zero());
        }
        let total: T = out.iter().copied().sum();
        if total > T::zero() {
            out.iter_mut().for_each(|p| *p /= total);
        }
        Ok(out)
    }
}
