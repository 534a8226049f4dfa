//! `detect-vqe` batch front end.

mod config;
mod error;
mod job;
mod manifest;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detect_vqe::noise::{NoiseConfig, ReadoutError};
use detect_vqe::unfold::UnfoldSettings;
use detect_vqe::vqe::{Family, Sampling, DEFAULT_GRID_POINTS};

use config::FileConfig;
use error::CliError;
use job::{Job, Profile, SweepJob};

#[derive(Parser)]
#[command(name = "detect-vqe", version, about = "Noisy H2 VQE with the [[4,2,2]] error-detecting code")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact ground-state energy for every row of a coefficient table.
    Exact(ExactArgs),
    /// Term estimates over the θ grid for one circuit family.
    Sweep(SweepArgs),
    /// Potential curve (θ*, E*, ΔE per R) from one or more sweeps.
    Curve(CurveArgs),
    /// Exact-mode energy errors of both families against gate noise.
    NoiseScan(ScanArgs),
    /// Raw versus unfolded readout spectra of a sampled ansatz state.
    UnfoldDemo(DemoArgs),
    /// Rank noise/readout profiles by their ⟨X1X2⟩ probe distance.
    ScoreMappings(ScoreArgs),
    /// Re-run a recorded manifest and verify byte-identical outputs.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Manifest path (default: first output + `.manifest.json`).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<(FileConfig, Option<PathBuf>), CliError> {
        Ok((FileConfig::load(self.config.as_deref())?, self.manifest.clone()))
    }
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Manifest path (default: output + `.manifest.json`).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Physical,
    Encoded,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Physical => Family::Physical,
            FamilyArg::Encoded => Family::Encoded,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct NoiseArgs {
    /// Two-qubit depolarizing rate p (single-qubit rate defaults to p/16).
    #[arg(long)]
    noise_p: Option<f64>,
    /// Override the single-qubit depolarizing rate.
    #[arg(long)]
    p1: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Shots per circuit.
    #[arg(long, conflicts_with = "exact")]
    shots: Option<u64>,
    /// Use outcome probabilities directly (default unless shots are given).
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `default` (0.01/0.05), `ideal`, or `E01,E10`.
    #[arg(long)]
    readout_model: Option<String>,
    #[arg(long, value_enum)]
    unfold: Option<OnOff>,
    /// Estimate the response matrix from this many calibration shots.
    #[arg(long)]
    calibration_shots: Option<u64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Terms CSV.
    #[arg(long)]
    out: PathBuf,
    /// Discard-statistics JSON (encoded family; default: next to --out).
    #[arg(long)]
    stats: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    coeffs: PathBuf,
    /// Terms CSV from `sweep`; repeat for several sweeps on the same grid.
    #[arg(long, required = true)]
    terms: Vec<PathBuf>,
    /// One output per --terms (default: `<terms stem>.curve.csv`).
    #[arg(long)]
    out: Vec<PathBuf>,
    /// Manifest path (default: first output + `.manifest.json`).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    coeffs: PathBuf,
    /// Internuclear separation in Å (nearest table row is used).
    #[arg(long)]
    r: Option<f64>,
    /// Comma-separated noise levels (default 0.02, 0.04, …, 0.60).
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Summary JSON with the crossover (default: next to --out).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DemoArgs {
    /// Number of measured qubits: 2 (physical) or 6 (encoded).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    readout_model: Option<String>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ansatz angle of the truth state.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReplayArgs {
    manifest: PathBuf,
    /// Write the replayed outputs here instead of their recorded paths.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    s.parse().map_err(|_| usage(format!("unknown family {s:?} (physical|encoded)")))
}

fn parse_readout(s: &str) -> Result<ReadoutError<f64>, CliError> {
    let err = match s.trim() {
        "default" => ReadoutError::default_asymmetric(),
        "ideal" => ReadoutError { e01: 0.0, e10: 0.0 },
        pair => {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            let [a, b] = parts.as_slice() else {
                return Err(usage(format!("readout model {s:?}: expected default, ideal or E01,E10")));
            };
            let num = |x: &str| x.parse::<f64>().map_err(|_| usage(format!("readout model {s:?}: {x:?} is not a number")));
            ReadoutError { e01: num(a)?, e10: num(b)? }
        }
    };
    let ok = |x: f64| (0.0..=1.0).contains(&x);
    if !ok(err.e01) || !ok(err.e10) {
        return Err(usage(format!("readout rates in {s:?} must lie in [0, 1]")));
    }
    Ok(err)
}

fn noise_config(p: f64, p1: Option<f64>) -> Result<NoiseConfig<f64>, CliError> {
    let mut n = NoiseConfig::from_p(p);
    if let Some(p1) = p1 {
        n.p1 = p1;
    }
    n.validate().map_err(|e| usage(e.to_string()))?;
    Ok(n)
}

fn unfold_settings(max_iters: Option<usize>, tol: Option<f64>, cfg: &FileConfig) -> Result<UnfoldSettings, CliError> {
    let d = UnfoldSettings::default();
    let s = UnfoldSettings {
        max_iters: max_iters.or(cfg.unfold.max_iters).unwrap_or(d.max_iters),
        tol: tol.or(cfg.unfold.tol).unwrap_or(d.tol),
    };
    s.validate().map_err(|e| usage(e.to_string()))?;
    Ok(s)
}

fn check_grid(grid: usize) -> Result<usize, CliError> {
    if grid < 3 || grid.is_multiple_of(2) {
        return Err(usage(format!("--grid must be odd and at least 3, got {grid}")));
    }
    Ok(grid)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn sweep_job(a: SweepArgs, cfg: &FileConfig) -> Result<Job, CliError> {
    let family = match (a.family, &cfg.sweep.family) {
        (Some(f), _) => f.into(),
        (None, Some(s)) => parse_family(s)?,
        (None, None) => return Err(usage("--family is required")),
    };
    let noise = noise_config(a.noise.noise_p.or(cfg.noise.p).unwrap_or(0.0), a.noise.p1.or(cfg.noise.p1))?;
    let shots = if a.exact { None } else { a.shots.or(if cfg.sweep.exact == Some(true) { None } else { cfg.sweep.shots }) };
    let seed = a.seed.or(cfg.sweep.seed).unwrap_or(0);
    let sampling = match shots {
        Some(0) => return Err(usage("--shots must be positive")),
        Some(shots) => Sampling::Shots { shots, seed },
        None => Sampling::Exact,
    };
    let readout = a.readout_model.as_deref().or(cfg.readout.model.as_deref()).map(parse_readout).transpose()?;
    let unfold_on = match a.unfold {
        Some(OnOff::On) => true,
        Some(OnOff::Off) => false,
        None => cfg.sweep.unfold.unwrap_or(false),
    };
    if unfold_on && readout.is_none() {
        return Err(usage("--unfold on requires --readout-model"));
    }
    let unfold = if unfold_on { Some(unfold_settings(a.max_iters, a.tol, cfg)?) } else { None };
    let calibration_shots = a.calibration_shots.or(cfg.sweep.calibration_shots);
    if calibration_shots.is_some() && (!unfold_on || sampling == Sampling::Exact) {
        return Err(usage("--calibration-shots needs --unfold on and --shots"));
    }
    let grid = check_grid(a.grid.or(cfg.sweep.grid).unwrap_or(DEFAULT_GRID_POINTS))?;
    let stats = match family {
        Family::Encoded => Some(a.stats.unwrap_or_else(|| sibling(&a.out, ".discards.json"))),
        Family::Physical => a.stats,
    };
    Ok(Job::Sweep(SweepJob { family, noise, readout, unfold, calibration_shots, grid, sampling, out: a.out, stats }))
}

fn curve_job(a: CurveArgs) -> Result<Job, CliError> {
    let out = if a.out.is_empty() {
        a.terms.iter().map(|t| sibling(t, ".curve.csv")).collect()
    } else if a.out.len() == a.terms.len() {
        a.out
    } else {
        return Err(usage(format!("{} --out paths for {} --terms files", a.out.len(), a.terms.len())));
    };
    Ok(Job::Curve { coeffs: a.coeffs, terms: a.terms, out })
}

fn scan_job(a: ScanArgs, cfg: &FileConfig) -> Result<Job, CliError> {
    let p = a.p.or(cfg.scan.p.clone()).unwrap_or_else(|| (1..=30).map(|k| f64::from(k) * 0.02).collect());
    if p.is_empty() || p.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(usage("noise levels must be a nonempty list in [0, 1]"));
    }
    let grid = check_grid(a.grid.or(cfg.sweep.grid).unwrap_or(DEFAULT_GRID_POINTS))?;
    let summary = a.summary.unwrap_or_else(|| sibling(&a.out, ".summary.json"));
    Ok(Job::NoiseScan { coeffs: a.coeffs, r: a.r.or(cfg.scan.r).unwrap_or(0.75), p, grid, out: a.out, summary })
}

fn demo_job(a: DemoArgs, cfg: &FileConfig) -> Result<Job, CliError> {
    let n = a.n.or(cfg.demo.n).unwrap_or(6);
    if n != 2 && n != 6 {
        return Err(usage(format!("--n must be 2 or 6, got {n}")));
    }
    let readout = parse_readout(a.readout_model.as_deref().or(cfg.readout.model.as_deref()).unwrap_or("default"))?;
    let shots = a.shots.or(cfg.demo.shots).unwrap_or(1_000_000);
    if shots == 0 {
        return Err(usage("--shots must be positive"));
    }
    let theta = a.theta.or(cfg.demo.theta).unwrap_or(0.6);
    if !(-std::f64::consts::PI..=std::f64::consts::PI).contains(&theta) {
        return Err(usage("--theta must lie in [-π, π]"));
    }
    Ok(Job::UnfoldDemo {
        n,
        readout,
        shots,
        seed: a.seed.or(cfg.sweep.seed).unwrap_or(0),
        theta,
        unfold: unfold_settings(a.max_iters, a.tol, cfg)?,
        summary: a.summary.unwrap_or_else(|| sibling(&a.out, ".summary.json")),
        out: a.out,
    })
}

fn score_job(a: ScoreArgs, cfg: &FileConfig) -> Result<Job, CliError> {
    if cfg.profiles.len() < 2 {
        return Err(usage("score-mappings needs a --config with at least two [[profile]] entries"));
    }
    let family = match (a.family, &cfg.score.family) {
        (Some(f), _) => f.into(),
        (None, Some(s)) => parse_family(s)?,
        (None, None) => Family::Physical,
    };
    let profiles = cfg
        .profiles
        .iter()
        .map(|p| {
            Ok(Profile {
                name: p.name.clone(),
                noise: noise_config(p.p, p.p1)?,
                readout: p.readout.as_deref().map(parse_readout).transpose()?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let sampling = match a.shots.or(cfg.sweep.shots) {
        Some(0) => return Err(usage("--shots must be positive")),
        Some(shots) => Sampling::Shots { shots, seed: a.seed.or(cfg.sweep.seed).unwrap_or(0) },
        None => Sampling::Exact,
    };
    Ok(Job::ScoreMappings { family, profiles, sampling, out: a.out })
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let (job, manifest) = match cli.cmd {
        Cmd::Replay(r) => return manifest::replay(&r.manifest, r.out_dir.as_deref()),
        Cmd::Exact(a) => (Job::Exact { coeffs: a.coeffs, out: a.out }, a.manifest),
        Cmd::Curve(a) => {
            let manifest = a.manifest.clone();
            (curve_job(a)?, manifest)
        }
        Cmd::Sweep(a) => {
            let (cfg, manifest) = a.common.resolve()?;
            (sweep_job(a, &cfg)?, manifest)
        }
        Cmd::NoiseScan(a) => {
            let (cfg, manifest) = a.common.resolve()?;
            (scan_job(a, &cfg)?, manifest)
        }
        Cmd::UnfoldDemo(a) => {
            let (cfg, manifest) = a.common.resolve()?;
            (demo_job(a, &cfg)?, manifest)
        }
        Cmd::ScoreMappings(a) => {
            let (cfg, manifest) = a.common.resolve()?;
            (score_job(a, &cfg)?, manifest)
        }
    };
    let (m, mut messages) = manifest::run(job, manifest.as_deref())?;
    messages.extend(m.outputs.iter().map(|o| format!("wrote {}", o.path.display())));
    Ok(messages)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(lines) => {
            lines.iter().for_each(|l| println!("{l}"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
