use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Expectation values of the four measured Pauli terms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TermValues<T> {
    pub z1: T,
    pub z2: T,
    pub z1z2: T,
    pub x1x2: T,
}

impl<T: Real> TermValues<T> {
    /// Noiseless values of the ansatz `cos(θ/2)|00⟩ + sin(θ/2)|11⟩`.
    pub fn analytic(theta: T) -> Self {
        Self { z1: theta.cos(), z2: theta.cos(), z1z2: T::one(), x1x2: theta.sin() }
    }

    pub fn as_array(&self) -> [T; 4] {
        [self.z1, self.z2, self.z1z2, self.x1x2]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.as_array().iter().zip(other.as_array()).map(|(a, b)| (*a - b).abs()).fold(T::zero(), T::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Z1,
    Z2,
    Z1Z2,
    X1X2,
}

/// Hamiltonian `g1·I + g2·Z1 + g3·Z2 + g4·Z1Z2 + g5·X1X2` (Hartree).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients<T> {
    pub g: [T; 5],
}

impl<T: Real> Coefficients<T> {
    pub fn new(g: [T; 5]) -> Self {
        Self { g }
    }

    /// `E = g1 + g2⟨Z1⟩ + g3⟨Z2⟩ + g4⟨Z1Z2⟩ + g5⟨X1X2⟩`.
    pub fn energy(&self, t: &TermValues<T>) -> T {
        let [g1, g2, g3, g4, g5] = self.g;
        g1 + g2 * t.z1 + g3 * t.z2 + g4 * t.z1z2 + g5 * t.x1x2
    }

    /// Lowest eigenvalue of the 4×4 Hamiltonian.
    ///
    /// The matrix splits into the `{|00⟩,|11⟩}` and `{|01⟩,|10⟩}` blocks,
    /// each coupled only by `g5`.
    pub fn exact_ground_energy(&self) -> T {
        let [g1, g2, g3, g4, g5] = self.g;
        let block_min = |a: T, d: T| {
            let mean = (a + d) / T::lit(2.0);
            let half = (a - d) / T::lit(2.0);
            mean - (half * half + g5 * g5).sqrt()
        };
        let even = block_min(g1 + g2 + g3 + g4, g1 - g2 - g3 + g4);
        let odd = block_min(g1 - g2 + g3 - g4, g1 + g2 - g3 - g4);
        even.min(odd)
    }

    /// Minimum over θ of the noiseless ansatz energy.
    pub fn ansatz_minimum(&self) -> T {
        let [g1, g2, g3, g4, g5] = self.g;
        g1 + g4 - ((g2 + g3) * (g2 + g3) + g5 * g5).sqrt()
    }
}

pub fn energy<T: Real>(terms: &TermValues<T>, g: &Coefficients<T>) -> T {
    g.energy(terms)
}

pub fn exact_ground_energy<T: Real>(g: &Coefficients<T>) -> T {
    g.exact_ground_energy()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientRow<T> {
    /// Internuclear separation (Å).
    pub r: T,
    pub g: Coefficients<T>,
}

/// Coefficients tabulated against internuclear separation.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    rows: Vec<CoefficientRow<T>>,
}

const HEADER: [&str; 6] = ["R", "g1", "g2", "g3", "g4", "g5"];

impl<T: Real> CoefficientTable<T> {
    pub fn new(rows: Vec<CoefficientRow<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Input("coefficient table is empty".into()));
        }
        for (k, w) in rows.windows(2).enumerate() {
            if w[1].r <= w[0].r {
                return Err(Error::Format(format!("R must be strictly increasing (row {})", k + 2)));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[CoefficientRow<T>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row closest to `r`, and whether it matches to within 1e-9 Å.
    pub fn nearest(&self, r: T) -> (&CoefficientRow<T>, bool) {
        let row = self
            .rows
            .iter()
            .min_by(|a, b| (a.r - r).abs().partial_cmp(&(b.r - r).abs()).expect("finite R"))
            .expect("table is nonempty");
        (row, (row.r - r).abs() <= T::lit(1e-9))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::from_reader(file)
    }

    /// Parses `R,g1,g2,g3,g4,g5` CSV; lines starting with `#` are comments.
    /// Errors carry the 1-based line number of the offending record.
    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_reader(reader);
        let header_line = rdr.position().line();
        let headers = rdr.headers().map_err(|e| ingest_csv(e, header_line))?.clone();
        if headers.iter().collect::<Vec<_>>() != HEADER {
            let line = headers.position().map_or(1, |p| p.line() as usize);
            return Err(Error::Ingest { line, msg: format!("expected header {}", HEADER.join(",")) });
        }
        let mut rows: Vec<CoefficientRow<T>> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| ingest_csv(e, 0))?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let mut vals = [T::zero(); 6];
            for (k, field) in rec.iter().enumerate() {
                let x: f64 = field
                    .parse()
                    .map_err(|_| Error::Ingest { line, msg: format!("column {}: {field:?} is not a number", HEADER[k]) })?;
                if !x.is_finite() {
                    return Err(Error::Ingest { line, msg: format!("column {} is not finite", HEADER[k]) });
                }
                vals[k] = T::lit(x);
            }
            if let Some(prev) = rows.last() {
                if vals[0] <= prev.r {
                    return Err(Error::Ingest { line, msg: "R must be strictly increasing".into() });
                }
            }
            rows.push(CoefficientRow { r: vals[0], g: Coefficients::new([vals[1], vals[2], vals[3], vals[4], vals[5]]) });
        }
        if rows.is_empty() {
            return Err(Error::Input("coefficient table has no rows".into()));
        }
        Ok(Self { rows })
    }
}

fn ingest_csv(e: csv::Error, fallback: u64) -> Error {
    let line = e.position().map_or(fallback, |p| p.line()) as usize;
    Error::Ingest { line, msg: e.to_string() }
}
