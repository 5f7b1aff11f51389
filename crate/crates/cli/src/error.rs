use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or unknown names. Exit code 2.
    #[error("{0}")]
    Validation(String),
    #[error("missing artifact {path}: {reason}")]
    Missing { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Core(curveguide::Error),
    #[error("{failed} pipeline cell(s) failed; see summary")]
    Pipeline { failed: usize },
}

impl From<curveguide::Error> for CliError {
    fn from(e: curveguide::Error) -> Self {
        match e {
            curveguide::Error::InvalidInput(m) => CliError::Validation(m),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn validation<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}
