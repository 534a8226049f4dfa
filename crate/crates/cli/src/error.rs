use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] detect_vqe::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("replay: {0}")]
    Replay(String),
}

impl CliError {
    /// 2 usage, 3 ingestion/format, 4 numeric, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use detect_vqe::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Ingest { .. } | E::Input(_) | E::Format(_) | E::Csv(_)) => 3,
            CliError::Core(E::Io(_)) | CliError::Io(_) | CliError::Replay(_) => 1,
            CliError::Core(_) => 4,
        }
    }
}
