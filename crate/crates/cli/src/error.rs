use thiserror::Error;

/// Failures that map to exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] jtl_core::Error),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("suite `{suite}` failed {failed} of {trials} trials")]
    SuiteFailed { suite: String, failed: usize, trials: usize },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn input_error<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(msg.into()))
}
