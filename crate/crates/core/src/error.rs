use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("{a} is not coprime to {n}")]
    NotCoprime { a: u64, n: u64 },

    #[error("sieve limit {limit} exceeds the configured budget of {budget} entries")]
    Capacity { limit: u64, budget: u64 },

    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u32, base: u32 },

    #[error("counter shapes differ: (g={g1}, k={k1}) vs (g={g2}, k={k2})")]
    ShapeMismatch { g1: u32, k1: usize, g2: u32, k2: usize },

    #[error("right-hand counter was not seeded with the left-hand carry")]
    CarryMismatch,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed {what} file: {reason}")]
    Format { what: &'static str, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
