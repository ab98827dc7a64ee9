use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("out of regime: {0}")]
    OutOfRegime(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("{0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 invalid input, 3 out of regime, 4 indeterminate under `--strict`.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::OutOfRegime(_) => 3,
            CliError::Indeterminate(_) => 4,
            CliError::Internal(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}
