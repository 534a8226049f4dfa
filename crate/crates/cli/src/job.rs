//! Fully resolved commands. A `Job` carries every setting that influences
//! the output, so serializing it into the manifest is enough to replay.

use std::path::{Path, PathBuf};

use detect_vqe::code422::DiscardStats;
use detect_vqe::io::{self as dio, write_rows, DemoRow, ExactRow, ScoreRow};
use detect_vqe::noise::{apply_readout, build_response, NoiseConfig, ReadoutError, ReadoutModel};
use detect_vqe::sim::{sample_counts, MeasBasis, Relabel};
use detect_vqe::unfold::{unfold, Prior, Spectrum, UnfoldSettings};
use detect_vqe::vqe::{
    ansatz_circuit, crossover, noise_scan, potential_curve, probe_score, run_sweep, CoefficientTable, Family,
    Sampling, SweepConfig, TermEstimates,
};
use detect_vqe::Error;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::Artifact;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepJob {
    pub family: Family,
    pub noise: NoiseConfig<f64>,
    pub readout: Option<ReadoutError<f64>>,
    pub unfold: Option<UnfoldSettings>,
    pub calibration_shots: Option<u64>,
    pub grid: usize,
    pub sampling: Sampling,
    pub out: PathBuf,
    pub stats: Option<PathBuf>,
}

impl SweepJob {
    pub fn config(&self) -> SweepConfig<f64> {
        SweepConfig {
            family: self.family,
            grid_points: self.grid,
            noise: self.noise,
            readout: self.readout.map(|e| ReadoutModel::uniform(self.family.n_qubits(), e)),
            unfold: self.unfold,
            calibration_shots: self.calibration_shots,
            sampling: self.sampling,
            merge_branches: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub name: String,
    pub noise: NoiseConfig<f64>,
    pub readout: Option<ReadoutError<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Job {
    Exact {
        coeffs: PathBuf,
        out: PathBuf,
    },
    Sweep(SweepJob),
    Curve {
        coeffs: PathBuf,
        terms: Vec<PathBuf>,
        out: Vec<PathBuf>,
    },
    NoiseScan {
        coeffs: PathBuf,
        r: f64,
        p: Vec<f64>,
        grid: usize,
        out: PathBuf,
        summary: PathBuf,
    },
    UnfoldDemo {
        n: usize,
        readout: ReadoutError<f64>,
        shots: u64,
        seed: u64,
        theta: f64,
        unfold: UnfoldSettings,
        out: PathBuf,
        summary: PathBuf,
    },
    ScoreMappings {
        family: Family,
        profiles: Vec<Profile>,
        sampling: Sampling,
        out: PathBuf,
    },
}

/// Result files plus lines for the terminal.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoSummary {
    pub l1_raw: f64,
    pub l1_corrected: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub r_requested: f64,
    pub r_used: f64,
    pub crossover: Option<f64>,
}

#[derive(Serialize)]
struct PointStats {
    theta: f64,
    z_basis: DiscardStats,
    x_basis: DiscardStats,
}

#[derive(Serialize)]
struct SweepStats {
    family: Family,
    totals: DiscardStats,
    discard_fraction: f64,
    empty_points: Vec<usize>,
    points: Vec<PointStats>,
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> detect_vqe::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn sweep_stats(est: &TermEstimates<f64>) -> SweepStats {
    let mut totals = DiscardStats::default();
    let points = est
        .points
        .iter()
        .map(|p| {
            totals.add(&p.stats_z);
            totals.add(&p.stats_x);
            PointStats { theta: p.theta, z_basis: p.stats_z, x_basis: p.stats_x }
        })
        .collect();
    let discarded = totals.discarded_flag + totals.discarded_parity;
    SweepStats {
        family: est.family,
        totals,
        discard_fraction: if totals.shots_in > 0.0 { discarded / totals.shots_in } else { 0.0 },
        empty_points: est.empty_points(),
        points,
    }
}

fn load_table(path: &Path) -> Result<CoefficientTable<f64>, CliError> {
    Ok(CoefficientTable::from_path(path)?)
}

impl Job {
    pub fn inputs(&self) -> Vec<PathBuf> {
        match self {
            Job::Exact { coeffs, .. } | Job::NoiseScan { coeffs, .. } => vec![coeffs.clone()],
            Job::Curve { coeffs, terms, .. } => std::iter::once(coeffs.clone()).chain(terms.iter().cloned()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn outputs(&self) -> Vec<PathBuf> {
        match self {
            Job::Exact { out, .. } | Job::ScoreMappings { out, .. } => vec![out.clone()],
            Job::Sweep(s) => std::iter::once(s.out.clone()).chain(s.stats.clone()).collect(),
            Job::Curve { out, .. } => out.clone(),
            Job::NoiseScan { out, summary, .. } | Job::UnfoldDemo { out, summary, .. } => {
                vec![out.clone(), summary.clone()]
            }
        }
    }

    /// Points every output at `dir`, keeping file names.
    pub fn redirect_outputs(&mut self, dir: &Path) {
        let mv = |p: &mut PathBuf| *p = dir.join(p.file_name().expect("output paths name a file"));
        match self {
            Job::Exact { out, .. } | Job::ScoreMappings { out, .. } => mv(out),
            Job::Sweep(s) => {
                mv(&mut s.out);
                if let Some(st) = s.stats.as_mut() {
                    mv(st);
                }
            }
            Job::Curve { out, .. } => out.iter_mut().for_each(mv),
            Job::NoiseScan { out, summary, .. } | Job::UnfoldDemo { out, summary, .. } => {
                mv(out);
                mv(summary);
            }
        }
    }

    pub fn execute(&self) -> Result<Outcome, CliError> {
        let mut messages = Vec::new();
        let artifacts = match self {
            Job::Exact { coeffs, out } => {
                let table = load_table(coeffs)?;
                let rows = table.rows().iter().map(|r| ExactRow { r: r.r, e_exact: r.g.exact_ground_energy() });
                vec![Artifact::new(out, csv_bytes(|b| write_rows(b, rows))?)]
            }
            Job::Sweep(s) => {
                let est = run_sweep(&s.config())?;
                let empty = est.empty_points();
                if !empty.is_empty() {
                    messages.push(format!("warning: {} grid points lost every shot to postselection", empty.len()));
                }
                let mut v = vec![Artifact::new(&s.out, csv_bytes(|b| dio::write_sweep(b, &est))?)];
                if let Some(path) = &s.stats {
                    v.push(Artifact::json(path, &sweep_stats(&est)));
                }
                v
            }
            Job::Curve { coeffs, terms, out } => {
                let table = load_table(coeffs)?;
                let sweeps = terms
                    .iter()
                    .map(|p| {
                        let f = std::fs::File::open(p)
                            .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
                        dio::read_sweep::<f64>(f, Family::Physical)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let grid = sweeps[0].thetas();
                if grid.len() < 3 || grid.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Format(format!("{}: θ grid must be increasing with ≥ 3 points", terms[0].display())).into());
                }
                for (s, p) in sweeps.iter().zip(terms) {
                    if s.thetas() != grid {
                        return Err(Error::Format(format!("{}: θ grid differs from {}", p.display(), terms[0].display())).into());
                    }
                }
                sweeps
                    .iter()
                    .zip(out)
                    .map(|(s, o)| {
                        let curve = potential_curve(&table, s)?;
                        Ok(Artifact::new(o, csv_bytes(|b| dio::write_curve(b, &curve))?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?
            }
            Job::NoiseScan { coeffs, r, p, grid, out, summary } => {
                let table = load_table(coeffs)?;
                let (row, exact) = table.nearest(*r);
                if !exact {
                    messages.push(format!("warning: R = {r} not in table, using nearest row R = {}", row.r));
                }
                let scan = noise_scan(&row.g, p, *grid)?;
                let cross = crossover(&scan);
                messages.push(match cross {
                    Some(c) => format!("crossover p* = {c:.4}"),
                    None => "no crossover within the scanned range".to_string(),
                });
                let s = ScanSummary { r_requested: *r, r_used: row.r, crossover: cross };
                vec![Artifact::new(out, csv_bytes(|b| dio::write_noise_scan(b, &scan))?), Artifact::json(summary, &s)]
            }
            Job::UnfoldDemo { n, readout, shots, seed, theta, unfold: settings, out, summary } => {
                let family = match n {
                    2 => Family::Physical,
                    6 => Family::Encoded,
                    _ => return Err(CliError::Usage(format!("unfold demo supports n = 2 or 6, got {n}"))),
                };
                let truth = ansatz_circuit(family, *theta, MeasBasis::Z).run()?.probabilities(&Relabel::identity(*n))?;
                let model = ReadoutModel::uniform(*n, *readout);
                let measured = apply_readout(&truth, &model)?;
                let counts = sample_counts(&measured, *shots, *seed)?;
                let raw = Spectrum::new(counts.normalized().expect("at least one shot"))?;
                let res = unfold(&build_response(&model, *n)?, &raw, Prior::Uniform, settings)?;
                let rows = (0..truth.len()).map(|i| DemoRow {
                    bin: i,
                    bits: counts.bitstring(i),
                    truth: truth[i],
                    raw: raw.as_slice()[i],
                    corrected: res.spectrum.as_slice()[i],
                });
                let s = DemoSummary {
                    l1_raw: raw.l1(&truth),
                    l1_corrected: res.spectrum.l1(&truth),
                    iterations: res.iterations,
                    converged: res.converged,
                };
                messages.push(format!(
                    "L1 to truth: raw {:.3e}, corrected {:.3e} ({} iterations)",
                    s.l1_raw, s.l1_corrected, s.iterations
                ));
                vec![Artifact::new(out, csv_bytes(|b| write_rows(b, rows))?), Artifact::json(summary, &s)]
            }
            Job::ScoreMappings { family, profiles, sampling, out } => {
                let mut scored = profiles
                    .iter()
                    .map(|prof| {
                        let mut cfg = SweepConfig::exact(*family, prof.noise);
                        cfg.readout = prof.readout.map(|e| ReadoutModel::uniform(family.n_qubits(), e));
                        cfg.sampling = *sampling;
                        Ok((prof.name.clone(), probe_score(&cfg)?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                // Stable sort keeps profile order among ties.
                scored.sort_by(|a, b| a.1.total_cmp(&b.1));
                let rows = scored.into_iter().enumerate().map(|(k, (profile, score))| ScoreRow { rank: k + 1, profile, score });
                vec![Artifact::new(out, csv_bytes(|b| write_rows(b, rows))?)]
            }
        };
        Ok(Outcome { artifacts, messages })
    }
}
