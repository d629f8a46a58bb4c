use thiserror::Error;

/// Crate-wide error type. Variants map one-to-one onto the failure classes
/// the public operations can signal; none of them are recoverable states,
/// all indicate either bad input or an exceeded resource budget.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible (dimensions, qubit counts, cuts).
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A register would exceed the configured qubit budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix that must be unitary is not, within tolerance.
    #[error("not unitary: {0}")]
    NotUnitary(String),

    /// A matrix that must be a density matrix (Hermitian, PSD, unit trace)
    /// is not, within tolerance.
    #[error("not a density matrix: {0}")]
    NotDensity(String),

    /// A numerical routine failed to converge or produced an inconsistent
    /// result (e.g. an eigensolver on degenerate input).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Input files or inline JSON violate the documented schema.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
    pub fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
