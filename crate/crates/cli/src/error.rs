use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] odd_ramsey::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid arguments: {0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn exit_code(&self) -> i32 {
        use odd_ramsey::Error as E;
        match self {
            CliError::Core(E::GuardExceeded { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Json(_) | CliError::Csv(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
