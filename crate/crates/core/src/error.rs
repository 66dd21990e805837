use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants are grouped the way the command-line tool maps them to exit
/// codes: malformed input, resource guards, unmet theorem hypotheses and
/// internal failures (a certificate that does not re-verify, or two decision
/// routes that disagree).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: String,
    },

    #[error("index {index} out of range for {len} weights")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("resource guard exceeded: {what} ({size} > {limit}); raise the limit to override")]
    Resource {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("hypothesis not satisfied: {message}")]
    Hypothesis {
        message: String,
        /// A kernel vector `c` with `A c = 0` and nonzero coordinate sum,
        /// which rules out invariance under scalar dilation.
        relation: Vec<BigInt>,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dims(expected: usize, found: usize, context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            expected,
            found,
            context: context.into(),
        }
    }
}
