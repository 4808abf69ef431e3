use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Preconditions that callers can check up front
/// (dimension agreement, hermitianness, monicity) get their own variants so
/// the command-line layer can map them to the usage exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("variable count mismatch: {0}")]
    Variables(String),

    #[error("matrix is not hermitian: {0}")]
    NotHermitian(String),

    #[error("pencil is not monic: {0}")]
    NotMonic(String),

    #[error("constant term is singular: {0}; affine-hull reduction is out of scope, translate the problem so the constant term is invertible")]
    SingularConstantTerm(String),

    #[error("degree too low for a Higman step: polynomial has degree {0}, need at least 2")]
    DegreeTooLow(i64),

    #[error("numerical rank decision is ambiguous: {0}")]
    RankAmbiguity(String),

    #[error("solver: {0}")]
    Solver(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True when the error signals a violated precondition rather than a
    /// numerical breakdown; the CLI maps these to the usage exit code.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Solver(_) | Error::RankAmbiguity(_))
    }
}
