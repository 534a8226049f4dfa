use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::job::Job;
use crate::output::{file_digest, write_atomic, Artifact};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    pub job: Job,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub wall_clock_seconds: f64,
}

pub fn default_manifest_path(job: &Job) -> PathBuf {
    let first = job.outputs().into_iter().next().expect("every job writes something");
    let mut name = first.file_name().expect("output names a file").to_os_string();
    name.push(".manifest.json");
    first.with_file_name(name)
}

fn digests(paths: Vec<PathBuf>) -> Result<Vec<FileDigest>, CliError> {
    paths
        .into_iter()
        .map(|path| {
            let sha256 = file_digest(&path)
                .map_err(|e| CliError::Core(detect_vqe::Error::Input(format!("{}: {e}", path.display()))))?;
            Ok(FileDigest { path, sha256 })
        })
        .collect()
}

/// Runs `job`, writes its outputs and then the manifest. Nothing is written
/// unless the whole computation succeeded.
pub fn run(job: Job, manifest_path: Option<&Path>) -> Result<(Manifest, Vec<String>), CliError> {
    let start = Instant::now();
    let inputs = digests(job.inputs())?;
    let outcome = job.execute()?;
    let outputs = persist(&outcome.artifacts)?;
    let manifest = Manifest {
        artifact: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        job,
        inputs,
        outputs,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let path = manifest_path.map(Path::to_path_buf).unwrap_or_else(|| default_manifest_path(&manifest.job));
    write_atomic(&path, &Artifact::json(&path, &manifest).bytes)?;
    Ok((manifest, outcome.messages))
}

fn persist(artifacts: &[Artifact]) -> Result<Vec<FileDigest>, CliError> {
    artifacts
        .iter()
        .map(|a| {
            write_atomic(&a.path, &a.bytes)?;
            Ok(FileDigest { path: a.path.clone(), sha256: a.digest() })
        })
        .collect()
}

pub fn load(path: &Path) -> Result<Manifest, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read manifest {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("manifest {}: {e}", path.display())))
}

/// Re-executes a manifest's job (optionally into `out_dir`) and checks that
/// inputs are unchanged and every output is byte-identical.
pub fn replay(path: &Path, out_dir: Option<&Path>) -> Result<Vec<String>, CliError> {
    let manifest = load(path)?;
    for input in &manifest.inputs {
        let now = file_digest(&input.path)?;
        if now != input.sha256 {
            return Err(CliError::Replay(format!("input {} changed since the recorded run", input.path.display())));
        }
    }
    let mut job = manifest.job.clone();
    if let Some(dir) = out_dir {
        job.redirect_outputs(dir);
    }
    let outcome = job.execute()?;
    let written = persist(&outcome.artifacts)?;
    let mut lines = Vec::new();
    let mut mismatched = Vec::new();
    for (new, old) in written.iter().zip(&manifest.outputs) {
        if new.sha256 == old.sha256 {
            lines.push(format!("identical: {}", new.path.display()));
        } else {
            mismatched.push(new.path.display().to_string());
        }
    }
    if !mismatched.is_empty() {
        return Err(CliError::Replay(format!("outputs differ: {}", mismatched.join(", "))));
    }
    Ok(lines)
}
