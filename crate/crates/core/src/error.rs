use thiserror::Error;

use crate::basep::ExactRational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{what} must lie in {range}, got {value}")]
    OutOfRange {
        what: &'static str,
        range: &'static str,
        value: ExactRational,
    },

    #[error("depth must be positive")]
    ZeroDepth,

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("polynomial is zero modulo {0}")]
    ZeroPolynomial(u64),

    #[error("polynomial has a nonzero constant term (a unit at the origin)")]
    Unit,

    #[error("{0}^{1} does not fit in 64 bits")]
    Overflow(u64, u32),

    #[error("splitting oracle found no admissible digit at level {level}")]
    DigitOutOfRange { level: u32 },

    #[error("nu table is inconsistent at level {level}: {message}")]
    InconsistentTable { level: u32, message: String },
}
