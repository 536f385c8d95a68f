use thiserror::Error;

use rinehart_core::Error as CoreError;

/// Failures of a CLI run, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("unresolved reference to {kind} {name:?}")]
    Unresolved { kind: &'static str, name: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("validation failed: {0}")]
    Invalid(String),
    #[error("internal verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 validation failure, 2 parse or usage error, 3 internal
    /// verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Unresolved { .. } | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(m) => CliError::Usage(m),
            CoreError::UnknownFixture(name) => CliError::Unresolved { kind: "fixture", name },
            CoreError::Verification(m) => CliError::Verification(m),
            e @ CoreError::NotContained => CliError::Verification(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
