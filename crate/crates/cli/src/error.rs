use thiserror::Error;

use covariant_lab::Error as CoreError;

/// Failures that end a command before a report is produced.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidGrid(_)
            | CoreError::GridTooSmall { .. }
            | CoreError::LengthMismatch { .. }
            | CoreError::NonFinite(_)
            | CoreError::InvalidParameter(_)
            | CoreError::Geometry(_) => CliError::Usage(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
