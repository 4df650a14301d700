use thiserror::Error;

/// Errors raised by the validated pipeline.
///
/// Several variants are not bugs: `DegenerateDenominator` for instance just
/// marks a parameter value at which a period function cannot be enclosed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,

    #[error("branch ambiguity: {0}")]
    BranchAmbiguity(String),

    #[error("path hits branch point {branch_point} (z = {z})")]
    BranchPointHit { z: String, branch_point: f64 },

    #[error("coefficient bounds did not converge within {pieces} pieces per segment")]
    SubdivisionLimitExceeded { pieces: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("denominator enclosure contains zero: {0}")]
    DegenerateDenominator(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("matrix is not unimodular: |det - 1| = {0:e}")]
    NonUnimodular(f64),

    #[error("grid node at z = {0} hits a puncture")]
    GridSingularity(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
