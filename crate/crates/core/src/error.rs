use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbentError {
    /// Two ring elements live in cyclotomic rings neither of which embeds in the other.
    #[error("incompatible cyclotomic moduli {0} and {1}")]
    IncompatibleModuli(u64, u64),
    /// Promotion target is not a multiple of the source modulus.
    #[error("cannot promote modulus {from} into modulus {to}")]
    InvalidPromotion { from: u64, to: u64 },
    /// A division that the algebra guarantees to be exact left a remainder.
    #[error("exact division by {divisor} failed: {context}")]
    NotDivisible { divisor: String, context: String },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("value {value} out of range [0, {bound}) at {location}")]
    OutOfRange {
        value: u64,
        bound: u64,
        location: String,
    },
    #[error("length mismatch: expected {expected}, got {actual} ({what})")]
    LengthMismatch {
        expected: usize,
        actual: usize,
        what: String,
    },
    /// Candidate sets are built pairwise distinct; two matches means a bug upstream.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GbentError>;
