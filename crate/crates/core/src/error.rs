use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A subspace that should lie inside another does not; upstream this
    /// means a differential failed to square to zero.
    #[error("subspace is not contained in the total space")]
    NotContained,
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("functional is not invariant under the Lie-Rinehart action")]
    NotInvariant,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
