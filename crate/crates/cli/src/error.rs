use std::fmt;

use whitney_trace::Error as CoreError;

/// Failure of a command, carrying the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Insufficient(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Insufficient(_) => 3,
            CliError::Config(_) => 4,
            CliError::Numerical(_) => 5,
        }
    }

    pub fn io(what: impl fmt::Display, err: std::io::Error) -> Self {
        CliError::Io(format!("{what}: {err}"))
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::LengthMismatch { .. }
            | CoreError::NonFinite(_)
            | CoreError::DuplicatePoint(_)
            | CoreError::NotIncreasing(_) => CliError::Parse(msg),
            CoreError::Empty | CoreError::InsufficientPoints { .. } | CoreError::SetExhausted => {
                CliError::Insufficient(msg)
            }
            CoreError::InvalidExponent(_) | CoreError::InvalidOrder | CoreError::ModeSizeMismatch { .. } => {
                CliError::Config(msg)
            }
            _ => CliError::Numerical(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
