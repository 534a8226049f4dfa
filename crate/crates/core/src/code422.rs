//! The [[4,2,2]] error-detecting code.
//!
//! Code words (strings read q1q2q3q4):
//!
//! | logical | constituents |
//! |---------|--------------|
//! | 00      | 0000, 1111   |
//! | 01      | 0011, 1100   |
//! | 10      | 0101, 1010   |
//! | 11      | 0110, 1001   |
//!
//! Logical operators: `X̄₁ = X₂X₄`, `X̄₂ = X₃X₄`, `Z̄₁ = Z₁Z₂`, `Z̄₂ = Z₁Z₃`.
//! Register layout: bits 0..3 are q1..q4, bit 4 is the flag ancilla a1,
//! bit 5 the rotation ancilla a2.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{Circuit, Counts, DensityState, Gate, MeasBasis, Relabel};

pub const Q1: usize = 0;
pub const Q2: usize = 1;
pub const Q3: usize = 2;
pub const Q4: usize = 3;
pub const A1: usize = 4;
pub const A2: usize = 5;
pub const N_CODE: usize = 4;
pub const N_QUBITS: usize = 6;

/// Logical basis state `|b1 b2⟩`; index `b1 | b2 << 1` in 2-bit counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LogicalWord {
    pub b1: bool,
    pub b2: bool,
}

impl LogicalWord {
    pub const ALL: [LogicalWord; 4] = [
        LogicalWord { b1: false, b2: false },
        LogicalWord { b1: false, b2: true },
        LogicalWord { b1: true, b2: false },
        LogicalWord { b1: true, b2: true },
    ];

    pub fn new(b1: bool, b2: bool) -> Self {
        Self { b1, b2 }
    }

    pub fn from_index(i: usize) -> Self {
        Self { b1: i & 1 == 1, b2: i & 2 == 2 }
    }

    pub fn index(self) -> usize {
        self.b1 as usize | (self.b2 as usize) << 1
    }

    /// The two code-qubit basis indices (q1 = bit 0) of this code word.
    pub fn constituents(self) -> [usize; 2] {
        // q1 = 0 branch: q2 = b1, q3 = b2, q4 = b1 ⊕ b2; the other is its complement.
        let (b1, b2) = (self.b1 as usize, self.b2 as usize);
        let low = b1 << Q2 | b2 << Q3 | (b1 ^ b2) << Q4;
        [low, low ^ 0b1111]
    }
}

/// Logical word of a 4-bit code string, `None` for odd parity.
pub fn logical_of(code: usize) -> Option<LogicalWord> {
    if (code & 0b1111).count_ones() % 2 == 1 {
        return None;
    }
    let bit = |q: usize| (code >> q) & 1 == 1;
    Some(LogicalWord { b1: bit(Q1) ^ bit(Q2), b2: bit(Q1) ^ bit(Q3) })
}

/// Parses a `q1q2q3q4` string such as `"0011"` into a basis index.
pub fn code_index(s: &str) -> Result<usize> {
    if s.len() != N_CODE || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Format(format!("{s:?} is not a 4-bit string")));
    }
    Ok(s.bytes().enumerate().fold(0, |acc, (q, b)| acc | ((b - b'0') as usize) << q))
}

/// Pure 4-qubit code word `(|c₀⟩ + |c₁⟩)/√2`.
pub fn encode_state<T: Real>(word: LogicalWord) -> DensityState<T> {
    let amp = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let mut psi = vec![Complex::new(T::zero(), T::zero()); 1 << N_CODE];
    for c in word.constituents() {
        psi[c] = amp;
    }
    DensityState::from_pure(&psi).expect("code word is normalized")
}

/// Six-qubit circuit preparing `|0̄0̄⟩` with a flag on a1.
pub fn prep_circuit<T: Real>() -> Circuit<T> {
    let mut c = Circuit::new(N_QUBITS);
    c.extend([
        Gate::h(Q1),
        Gate::cnot(Q1, Q2),
        Gate::cnot(Q2, Q3),
        Gate::cnot(Q3, Q4),
        Gate::cnot(Q1, A1),
        Gate::cnot(Q4, A1),
    ])
    .expect("static prep circuit is valid");
    c
}

/// Gates of the ancilla-assisted logical rotation on logical qubit 1.
///
/// Measuring a2 = 0 leaves `R̄y(θ)` applied, a2 = 1 leaves `R̄y(θ + π)`.
pub fn rotation_gadget<T: Real>(theta: T) -> [Gate<T>; 4] {
    [Gate::h(A2), Gate::cnot(A2, Q2), Gate::cnot(A2, Q4), Gate::ry(A2, -theta)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnotDirection {
    OneToTwo,
    TwoToOne,
}

/// Logical CNOT as a pure relabeling of the code qubits; no gates are added.
pub fn logical_cnot<T: Real>(circuit: &mut Circuit<T>, direction: CnotDirection) {
    match direction {
        CnotDirection::OneToTwo => circuit.relabel_mut().swap(Q1, Q2),
        CnotDirection::TwoToOne => circuit.relabel_mut().swap(Q1, Q3),
    }
}

/// Transversal Hadamard plus the q2 ↔ q3 label swap, so that a Z-basis
/// readout of the result measures `X̄₁X̄₂` through the usual decoder.
pub fn logical_basis_change<T: Real>(circuit: &mut Circuit<T>) -> Result<()> {
    if circuit.meas_basis() == MeasBasis::X {
        return Err(Error::Basis("logical basis change applied twice".into()));
    }
    circuit.extend([Q1, Q2, Q3, Q4].map(Gate::h))?;
    circuit.relabel_mut().swap(Q2, Q3);
    circuit.set_meas_basis(MeasBasis::X);
    Ok(())
}

/// Postselected logical histograms of one encoded run.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult<T> {
    /// a2 = 0 branch, logical 2-bit counts.
    pub kept_theta: Counts<T>,
    /// a2 = 1 branch, logical 2-bit counts (rotation angle shifted by π).
    pub kept_theta_pi: Counts<T>,
    pub discarded_flag: T,
    pub discarded_parity: T,
    pub shots_in: T,
}

impl<T: Real> DecodeResult<T> {
    pub fn kept(&self) -> T {
        self.kept_theta.shots() + self.kept_theta_pi.shots()
    }

    pub fn discard_fraction(&self) -> T {
        if self.shots_in > T::zero() {
            (self.discarded_flag + self.discarded_parity) / self.shots_in
        } else {
            T::zero()
        }
    }

    pub fn stats(&self) -> DiscardStats {
        DiscardStats {
            shots_in: self.shots_in.to_f64_lossy(),
            kept_theta: self.kept_theta.shots().to_f64_lossy(),
            kept_theta_pi: self.kept_theta_pi.shots().to_f64_lossy(),
            discarded_flag: self.discarded_flag.to_f64_lossy(),
            discarded_parity: self.discarded_parity.to_f64_lossy(),
        }
    }
}

/// Plain tallies of a decode, for reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DiscardStats {
    pub shots_in: f64,
    pub kept_theta: f64,
    pub kept_theta_pi: f64,
    pub discarded_flag: f64,
    pub discarded_parity: f64,
}

impl DiscardStats {
    pub fn add(&mut self, other: &DiscardStats) {
        self.shots_in += other.shots_in;
        self.kept_theta += other.kept_theta;
        self.kept_theta_pi += other.kept_theta_pi;
        self.discarded_flag += other.discarded_flag;
        self.discarded_parity += other.discarded_parity;
    }
}

/// Splits 6-bit counts over physical qubits into flagged, odd-parity and
/// the two kept logical branches. `relabel` maps code labels to physical
/// code qubits, as accumulated by [`logical_cnot`] and
/// [`logical_basis_change`].
pub fn decode_counts<T: Real>(counts: &Counts<T>, relabel: &Relabel) -> Result<DecodeResult<T>> {
    if counts.n_bits() != N_QUBITS {
        return Err(Error::Format(format!("decode needs {N_QUBITS}-bit counts, got {}", counts.n_bits())));
    }
    if relabel.len() != N_QUBITS || (N_CODE..N_QUBITS).any(|q| relabel.physical(q) != q) {
        return Err(Error::Format("relabel must permute only the code qubits".into()));
    }
    let mut out = DecodeResult {
        kept_theta: Counts::zeros(2),
        kept_theta_pi: Counts::zeros(2),
        discarded_flag: T::zero(),
        discarded_parity: T::zero(),
        shots_in: counts.shots(),
    };
    for (physical, &tally) in counts.tallies().iter().enumerate() {
        if tally == T::zero() {
            continue;
        }
        let labeled = relabel.physical_to_label_index(physical);
        if (labeled >> A1) & 1 == 1 {
            out.discarded_flag += tally;
            continue;
        }
        match logical_of(labeled & 0b1111) {
            None => out.discarded_parity += tally,
            Some(w) if (labeled >> A2) & 1 == 0 => out.kept_theta.add(w.index(), tally),
            Some(w) => out.kept_theta_pi.add(w.index(), tally),
        }
    }
    Ok(out)
}

/// Outcome of a single injected fault.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultReport<T> {
    /// Gate index the fault is inserted before (`ops.len()` = at the end).
    pub position: usize,
    pub qubit: usize,
    /// Fraction of shots discarded by flag or parity.
    pub discarded: T,
    /// Largest deviation of the kept a2 = 0 logical distribution from the
    /// fault-free one (zero when nothing is kept).
    pub kept_deviation: T,
}

/// Injects `fault` at every gate boundary on every qubit of `circuit`
/// (noiselessly) and reports what postselection makes of it.
pub fn enumerate_faults<T: Real>(
    circuit: &Circuit<T>,
    fault: fn(usize) -> Gate<T>,
    positions: impl IntoIterator<Item = usize>,
    qubits: &[usize],
) -> Result<Vec<FaultReport<T>>> {
    let reference = kept_distribution(circuit)?;
    let mut out = Vec::new();
    for position in positions {
        for &qubit in qubits {
            let mut faulty = circuit.clone();
            faulty.insert(position, fault(qubit))?;
            let probs = faulty.run()?.probabilities(&Relabel::identity(N_QUBITS))?;
            let decoded = decode_counts(&Counts::from_tallies(N_QUBITS, probs)?, faulty.relabel())?;
            let kept_deviation = match decoded.kept_theta.normalized() {
                Some(p) if decoded.kept_theta.shots() > T::lit(1e-12) => p
                    .iter()
                    .zip(&reference)
                    .map(|(a, b)| (*a - *b).abs())
                    .fold(T::zero(), T::max),
                _ => T::zero(),
            };
            out.push(FaultReport { position, qubit, discarded: decoded.discard_fraction(), kept_deviation });
        }
    }
    Ok(out)
}

fn kept_distribution<T: Real>(circuit: &Circuit<T>) -> Result<Vec<T>> {
    let probs = circuit.run()?.probabilities(&Relabel::identity(N_QUBITS))?;
    let decoded = decode_counts(&Counts::from_tallies(N_QUBITS, probs)?, circuit.relabel())?;
    decoded
        .kept_theta
        .normalized()
        .ok_or_else(|| Error::EmptyBranch("fault-free reference keeps nothing".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Pauli;
    use std::f64::consts::PI;

    fn physical_probs(c: &Circuit<f64>) -> Vec<f64> {
        c.run().unwrap().probabilities(&Relabel::identity(c.n_qubits())).unwrap()
    }

    fn decode_exact(c: &Circuit<f64>) -> DecodeResult<f64> {
        decode_counts(&Counts::from_tallies(N_QUBITS, physical_probs(c)).unwrap(), c.relabel()).unwrap()
    }

    #[test]
    fn code_word_table() {
        let table = [("0000", "1111", 0), ("0011", "1100", 2), ("0101", "1010", 1), ("0110", "1001", 3)];
        for (a, b, idx) in table {
            let w = LogicalWord::from_index(idx);
            let mut expect = [code_index(a).unwrap(), code_index(b).unwrap()];
            let mut got = w.constituents();
            expect.sort();
            got.sort();
            assert_eq!(got, expect);
            assert_eq!(logical_of(expect[0]), Some(w));
            assert_eq!(logical_of(expect[1]), Some(w));
        }
        assert_eq!(LogicalWord::new(false, true).index(), 2);
        assert!(code_index("012").is_err());
    }

    #[test]
    fn parity_classification_is_exhaustive() {
        let odd = (0..16).filter(|c| logical_of(*c).is_none()).count();
        assert_eq!(odd, 8);
        for w in LogicalWord::ALL {
            assert_eq!((0..16).filter(|c| logical_of(*c) == Some(w)).count(), 2);
        }
    }

    #[test]
    fn encoded_states_are_stabilized() {
        let xxxx: Vec<_> = (0..4).map(|q| (q, Pauli::X)).collect();
        let zzzz: Vec<_> = (0..4).map(|q| (q, Pauli::Z)).collect();
        for w in LogicalWord::ALL {
            let s = encode_state::<f64>(w);
            assert!((s.expectation(&xxxx).unwrap() - 1.0).abs() < 1e-12);
            assert!((s.expectation(&zzzz).unwrap() - 1.0).abs() < 1e-12);
        }
        let s = encode_state::<f64>(LogicalWord::new(true, false));
        let p = s.probabilities(&Relabel::identity(4)).unwrap();
        assert!((p[code_index("0101").unwrap()] - 0.5).abs() < 1e-15);
        assert!((p[code_index("1010").unwrap()] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn logical_operators_act_as_expected() {
        // X̄₁ = X₂X₄ maps 00̄ → 10̄, Z̄₁ = Z₁Z₂ has eigenvalue (−1)^b1.
        let mut s = encode_state::<f64>(LogicalWord::new(false, false));
        s.apply_pauli(Q2, Pauli::X).unwrap();
        s.apply_pauli(Q4, Pauli::X).unwrap();
        let target = encode_state::<f64>(LogicalWord::new(true, false));
        assert!(s.max_abs_diff(&target) < 1e-14);
        for w in LogicalWord::ALL {
            let s = encode_state::<f64>(w);
            let z1 = s.expectation(&[(Q1, Pauli::Z), (Q2, Pauli::Z)]).unwrap();
            let z2 = s.expectation(&[(Q1, Pauli::Z), (Q3, Pauli::Z)]).unwrap();
            assert!((z1 - if w.b1 { -1.0 } else { 1.0 }).abs() < 1e-14);
            assert!((z2 - if w.b2 { -1.0 } else { 1.0 }).abs() < 1e-14);
        }
    }

    #[test]
    fn prep_produces_code_word_and_quiet_flag() {
        let c = prep_circuit::<f64>();
        let s = c.run().unwrap();
        let p = physical_probs(&c);
        let flagged: f64 = (0..64).filter(|i| (i >> A1) & 1 == 1).map(|i| p[i]).sum();
        assert!(flagged.abs() < 1e-15);
        let code = s.reduce(&[Q1, Q2, Q3, Q4]).unwrap();
        let psi: Vec<_> = {
            let mut v = vec![Complex::new(0.0, 0.0); 16];
            v[0] = Complex::new(0.5f64.sqrt(), 0.0);
            v[15] = Complex::new(0.5f64.sqrt(), 0.0);
            v
        };
        assert!((code.fidelity_with_pure(&psi).unwrap() - 1.0).abs() < 1e-12);
        assert!(code.max_abs_diff(&encode_state(LogicalWord::new(false, false))) < 1e-12);
    }

    #[test]
    fn prep_x_faults_are_flagged_or_harmless() {
        let c = prep_circuit::<f64>();
        let reports = enumerate_faults(&c, Gate::x, 0..=c.ops().len(), &[Q1, Q2, Q3, Q4, A1]).unwrap();
        for r in &reports {
            assert!(
                (r.discarded - 1.0).abs() < 1e-12 || r.kept_deviation < 1e-12,
                "silent corruption at {r:?}"
            );
        }
        // The fault between the chain and the flag checks on q2 is caught.
        let r = reports.iter().find(|r| r.position == 4 && r.qubit == Q2).unwrap();
        assert!((r.discarded - 1.0).abs() < 1e-12);
    }

    #[test]
    fn logical_cnot_is_a_relabel() {
        let mut c = prep_circuit::<f64>();
        let before = c.ops().len();
        logical_cnot(&mut c, CnotDirection::OneToTwo);
        assert_eq!(c.ops().len(), before);
        logical_cnot(&mut c, CnotDirection::OneToTwo);
        assert!(c.relabel().is_identity());
        logical_cnot(&mut c, CnotDirection::TwoToOne);
        logical_cnot(&mut c, CnotDirection::TwoToOne);
        assert!(c.relabel().is_identity());
    }

    #[test]
    fn logical_cnot_truth_table() {
        // Oracle: permute constituents by hand and decode with the table.
        let mut relabel = Relabel::identity(N_QUBITS);
        relabel.swap(Q1, Q2);
        for w in LogicalWord::ALL {
            for c in w.constituents() {
                let got = logical_of(relabel.physical_to_label_index(c)).unwrap();
                assert_eq!(got, LogicalWord::new(w.b1, w.b1 ^ w.b2));
            }
        }
        let mut relabel = Relabel::identity(N_QUBITS);
        relabel.swap(Q1, Q3);
        for w in LogicalWord::ALL {
            for c in w.constituents() {
                let got = logical_of(relabel.physical_to_label_index(c)).unwrap();
                assert_eq!(got, LogicalWord::new(w.b1 ^ w.b2, w.b2));
            }
        }
    }

    fn gadget_circuit(theta: f64) -> Circuit<f64> {
        let mut c = prep_circuit::<f64>();
        c.extend(rotation_gadget(theta)).unwrap();
        c
    }

    /// Code-qubit state conditioned on a2 = `outcome` (a1 traced out).
    fn branch_state(c: &Circuit<f64>, outcome: usize) -> DensityState<f64> {
        let mut s = c.run().unwrap();
        let proj = if outcome == 0 { [[1.0, 0.0], [0.0, 0.0]] } else { [[0.0, 0.0], [0.0, 1.0]] };
        let m = proj.map(|r| r.map(|x| Complex::new(x, 0.0)));
        s.apply_single(A2, &m);
        let code = s.reduce(&[Q1, Q2, Q3, Q4]).unwrap();
        let tr = code.trace().re;
        let data = code.as_slice().iter().map(|z| z / tr).collect();
        DensityState::from_matrix(4, data).unwrap()
    }

    fn logical_ry_target(theta: f64) -> Vec<Complex<f64>> {
        let mut psi = vec![Complex::new(0.0, 0.0); 16];
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        for (w, a) in [(LogicalWord::new(false, false), c), (LogicalWord::new(true, false), s)] {
            for k in w.constituents() {
                psi[k] += Complex::new(a * 0.5f64.sqrt(), 0.0);
            }
        }
        psi
    }

    #[test]
    fn gadget_branches() {
        assert!(branch_state(&gadget_circuit(0.0), 0)
            .max_abs_diff(&encode_state(LogicalWord::new(false, false)))
            < 1e-12);
        let s = branch_state(&gadget_circuit(PI / 2.0), 0);
        assert!((s.fidelity_with_pure(&logical_ry_target(PI / 2.0)).unwrap() - 1.0).abs() < 1e-12);
        for k in 0..17 {
            let theta = -PI + 2.0 * PI * k as f64 / 16.0;
            let c = gadget_circuit(theta);
            let p1 = branch_state(&c, 1);
            assert!((p1.fidelity_with_pure(&logical_ry_target(theta + PI)).unwrap() - 1.0).abs() < 1e-12);
            let p0 = branch_state(&c, 0);
            assert!((p0.fidelity_with_pure(&logical_ry_target(theta)).unwrap() - 1.0).abs() < 1e-12);
            let pr_a2_0: f64 = physical_probs(&c).iter().enumerate().filter(|(i, _)| (i >> A2) & 1 == 0).map(|(_, p)| p).sum();
            assert!((pr_a2_0 - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_change_examples() {
        let mut c = prep_circuit::<f64>();
        logical_basis_change(&mut c).unwrap();
        assert!(matches!(logical_basis_change(&mut c), Err(Error::Basis(_))));
        let p = physical_probs(&c);
        for code in 0..16 {
            let m: f64 = (0..4).map(|hi| p[code | hi << 4]).sum();
            let expect = if logical_of(code).is_some() { 1.0 / 8.0 } else { 0.0 };
            assert!((m - expect).abs() < 1e-12, "code {code}");
        }
        assert_eq!(decode_exact(&c).discarded_parity, 0.0);
    }

    #[test]
    fn decode_examples() {
        let single = |outcome: usize, n: f64| {
            let mut c = Counts::zeros(6);
            c.add(outcome, n);
            decode_counts(&c, &Relabel::identity(6)).unwrap()
        };
        let r = single(0, 100.0);
        assert_eq!(r.kept_theta.tallies(), &[100.0, 0.0, 0.0, 0.0]);
        let r = single(code_index("0001").unwrap(), 50.0);
        assert_eq!(r.discarded_parity, 50.0);
        let r = single(1 << A1, 7.0);
        assert_eq!(r.discarded_flag, 7.0);
        let r = single(1 << A2 | code_index("0110").unwrap(), 3.0);
        assert_eq!(r.kept_theta_pi.tallies(), &[0.0, 0.0, 0.0, 3.0]);
        assert!(matches!(decode_counts(&Counts::<f64>::zeros(4), &Relabel::identity(6)), Err(Error::Format(_))));
    }

    #[test]
    fn decode_conserves_shots() {
        let c = Counts::from_tallies(6, (0..64).map(|i| (i * 7 % 13) as f64).collect()).unwrap();
        let r = decode_counts(&c, &Relabel::identity(6)).unwrap();
        let total = r.kept() + r.discarded_flag + r.discarded_parity;
        assert!((total - r.shots_in).abs() < 1e-9);
    }

    #[test]
    fn stabilizers_hold_on_every_prefix() {
        let mut full = gadget_circuit(0.83);
        logical_basis_change(&mut full).unwrap();
        let xxxx: Vec<_> = (0..4).map(|q| (q, Pauli::X)).collect();
        let zzzz: Vec<_> = (0..4).map(|q| (q, Pauli::Z)).collect();
        // Boundaries between logical operations: chain, flags, gadget,
        // transversal H. Inside the flag pair and the controlled-X̄₁ pair the
        // code stabilizers are temporarily spread onto the ancillas.
        for len in [4, 6, 10, 14] {
            let mut c = Circuit::<f64>::new(6);
            c.extend(full.ops()[..len].iter().cloned()).unwrap();
            let s = c.run().unwrap();
            assert!((s.expectation(&xxxx).unwrap() - 1.0).abs() < 1e-12, "prefix {len}");
            assert!((s.expectation(&zzzz).unwrap() - 1.0).abs() < 1e-12, "prefix {len}");
        }
    }
}
