use thiserror::Error;

/// Errors produced by measure validation, generator evaluation, circuit
/// simulation, and the bound harness.
///
/// `InvalidInput`-style variants signal bad user data; `Consistency` signals
/// that a quantity the theory guarantees was violated beyond tolerance, which
/// is a bug surface rather than a user mistake.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
