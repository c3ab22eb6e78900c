use std::fmt;

use fudist_core::Error as CoreError;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag values or parameters outside a family's domain.
    Usage(String),
    /// Unreadable or malformed state file.
    Input(String),
    /// A state failed validation; names the invariant.
    Invariant(String),
    Io(String),
    /// `verify` found a discrepancy; the summary was already written.
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Input(_) => 2,
            Self::Invariant(_) => 3,
            Self::Io(_) | Self::VerifyFailed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "invalid arguments: {m}"),
            Self::Input(m) => write!(f, "malformed input: {m}"),
            Self::Invariant(m) => write!(f, "invariant violated: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::VerifyFailed(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidState { invariant, detail } => Self::Invariant(format!("{invariant} ({detail})")),
            CoreError::Format(m) => Self::Input(m),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
