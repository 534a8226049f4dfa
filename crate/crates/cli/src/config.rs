//! Optional TOML configuration file. Every key can also be given on the
//! command line, which takes precedence.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub readout: ReadoutSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub unfold: UnfoldSection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub demo: DemoSection,
    #[serde(default)]
    pub score: ScoreSection,
    #[serde(default, rename = "profile")]
    pub profiles: Vec<ProfileSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub p: Option<f64>,
    pub p1: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSection {
    /// `default`, `ideal`, or `E01,E10`.
    pub model: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub family: Option<String>,
    pub grid: Option<usize>,
    pub shots: Option<u64>,
    pub exact: Option<bool>,
    pub seed: Option<u64>,
    pub unfold: Option<bool>,
    pub calibration_shots: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnfoldSection {
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub r: Option<f64>,
    pub p: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemoSection {
    pub n: Option<usize>,
    pub shots: Option<u64>,
    pub theta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreSection {
    pub family: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub name: String,
    #[serde(default)]
    pub p: f64,
    pub p1: Option<f64>,
    pub readout: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}
