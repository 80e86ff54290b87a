use thiserror::Error;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty words are not allowed")]
    EmptyBlock,

    #[error("invalid symbol {symbol:?} at position {position}")]
    InvalidSymbol { symbol: char, position: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index range [{start}, {end}] out of bounds for block of length {len}")]
    IndexOutOfRange { start: usize, end: usize, len: usize },

    #[error("block of length {0} is too long for exhaustive enumeration (max 63)")]
    TooLong(usize),

    #[error("empty subshift: {0}")]
    EmptySubshift(String),

    #[error("enumeration cap exceeded: n = {n} > cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("matrix is not primitive: {0}")]
    NotPrimitive(String),

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("graph has no cycle, so it carries no invariant measure")]
    NoCycle,

    #[error("bound not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
