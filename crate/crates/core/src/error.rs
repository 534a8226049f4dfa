use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("target error: {0}")]
    Target(String),

    #[error("probability error: {0}")]
    Probability(String),

    #[error("basis error: {0}")]
    Basis(String),

    #[error("format error: {0}")]
    Format(String),

    /// A measured bin carries mass the response model says is unreachable.
    #[error("support error: measured bin {bin} has mass {mass} but zero predicted probability")]
    Support { bin: usize, mass: f64 },

    #[error("empty branch: {0}")]
    EmptyBranch(String),

    #[error("ingestion error at line {line}: {msg}")]
    Ingest { line: usize, msg: String },

    /// Unreadable or empty input file.
    #[error("ingestion error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
