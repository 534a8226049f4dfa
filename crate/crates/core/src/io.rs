//! CSV formats for results, with readers for every writer.
//!
//! Floats are written in shortest round-trip form, so reading back a file
//! reproduces the values exactly.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::code422::DiscardStats;
use crate::error::{Error, Result};
use crate::noise::ResponseMatrix;
use crate::scalar::Real;
use crate::vqe::{CurvePoint, Family, NoiseScanPoint, SweepPoint, TermEstimates, TermValues};

pub fn write_rows<S: Serialize>(w: impl Write, rows: impl IntoIterator<Item = S>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_rows<D: DeserializeOwned>(r: impl Read) -> Result<Vec<D>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    rdr.deserialize()
        .map(|rec| {
            rec.map_err(|e| Error::Ingest { line: e.position().map_or(0, |p| p.line() as usize), msg: e.to_string() })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub z1: Option<f64>,
    pub z2: Option<f64>,
    pub z1z2: Option<f64>,
    pub x1x2: Option<f64>,
    pub sigma_z1: Option<f64>,
    pub sigma_z2: Option<f64>,
    pub sigma_z1z2: Option<f64>,
    pub sigma_x1x2: Option<f64>,
}

fn f<T: Real>(x: T) -> f64 {
    x.to_f64_lossy()
}

impl SweepRow {
    pub fn from_point<T: Real>(p: &SweepPoint<T>) -> Self {
        let t = p.terms.map(|t| t.as_array().map(f));
        let s = p.sigma.map(|s| s.as_array().map(f));
        Self {
            theta: f(p.theta),
            z1: t.map(|v| v[0]),
            z2: t.map(|v| v[1]),
            z1z2: t.map(|v| v[2]),
            x1x2: t.map(|v| v[3]),
            sigma_z1: s.map(|v| v[0]),
            sigma_z2: s.map(|v| v[1]),
            sigma_z1z2: s.map(|v| v[2]),
            sigma_x1x2: s.map(|v| v[3]),
        }
    }

    pub fn to_point<T: Real>(&self) -> SweepPoint<T> {
        let values = |a: Option<f64>, b: Option<f64>, c: Option<f64>, d: Option<f64>| {
            Some(TermValues { z1: T::lit(a?), z2: T::lit(b?), z1z2: T::lit(c?), x1x2: T::lit(d?) })
        };
        SweepPoint {
            theta: T::lit(self.theta),
            terms: values(self.z1, self.z2, self.z1z2, self.x1x2),
            sigma: values(self.sigma_z1, self.sigma_z2, self.sigma_z1z2, self.sigma_x1x2),
            stats_z: DiscardStats::default(),
            stats_x: DiscardStats::default(),
        }
    }
}

pub fn write_sweep<T: Real>(w: impl Write, est: &TermEstimates<T>) -> Result<()> {
    write_rows(w, est.points.iter().map(SweepRow::from_point))
}

/// Reads a sweep CSV. Discard tallies are not part of the format and come
/// back zeroed.
pub fn read_sweep<T: Real>(r: impl Read, family: Family) -> Result<TermEstimates<T>> {
    let rows: Vec<SweepRow> = read_rows(r)?;
    if rows.is_empty() {
        return Err(Error::Input("sweep file has no rows".into()));
    }
    Ok(TermEstimates { family, points: rows.iter().map(SweepRow::to_point).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub theta_star: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "E_exact")]
    pub e_exact: f64,
    #[serde(rename = "dE")]
    pub de: f64,
    pub chem_acc: bool,
}

impl<T: Real> From<&CurvePoint<T>> for CurveRow {
    fn from(p: &CurvePoint<T>) -> Self {
        Self {
            r: f(p.r),
            theta_star: f(p.theta_star),
            e: f(p.energy),
            e_exact: f(p.energy_exact),
            de: f(p.delta),
            chem_acc: p.chemically_accurate(),
        }
    }
}

pub fn write_curve<T: Real>(w: impl Write, curve: &[CurvePoint<T>]) -> Result<()> {
    write_rows(w, curve.iter().map(CurveRow::from))
}

pub fn read_curve(r: impl Read) -> Result<Vec<CurveRow>> {
    read_rows(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseScanRow {
    pub p: f64,
    pub error_physical: f64,
    pub error_encoded: f64,
}

impl<T: Real> From<&NoiseScanPoint<T>> for NoiseScanRow {
    fn from(s: &NoiseScanPoint<T>) -> Self {
        Self { p: f(s.p), error_physical: f(s.error_physical), error_encoded: f(s.error_encoded) }
    }
}

pub fn write_noise_scan<T: Real>(w: impl Write, scan: &[NoiseScanPoint<T>]) -> Result<()> {
    write_rows(w, scan.iter().map(NoiseScanRow::from))
}

pub fn read_noise_scan(r: impl Read) -> Result<Vec<NoiseScanRow>> {
    read_rows(r)
}

/// Exact ground-state energy per separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactRow {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "E_exact")]
    pub e_exact: f64,
}

/// One profile of a mapping ranking (rank 1 = smallest distance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub rank: usize,
    pub profile: String,
    pub score: f64,
}

/// One bin of a raw-versus-unfolded spectrum comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub bin: usize,
    pub bits: String,
    pub truth: f64,
    pub raw: f64,
    pub corrected: f64,
}

/// Row-major response matrix, one CSV row per measured outcome, no header.
pub fn write_response<T: Real>(w: impl Write, r: &ResponseMatrix<T>) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for row in r.rows() {
        wtr.serialize(row.iter().map(|x| f(*x)).collect::<Vec<f64>>())?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_response<T: Real>(r: impl Read) -> Result<ResponseMatrix<T>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).from_reader(r);
    let mut data = Vec::new();
    let mut dim = 0;
    for rec in rdr.deserialize::<Vec<f64>>() {
        let row = rec.map_err(|e| Error::Ingest { line: e.position().map_or(0, |p| p.line() as usize), msg: e.to_string() })?;
        dim += 1;
        data.extend(row.into_iter().map(T::lit));
    }
    ResponseMatrix::from_rows(dim, data)
}
