use thiserror::Error;

/// Errors produced while building or analyzing a sequence set.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} must be an odd prime")]
    EvenPrime(u64),
    #[error("p and q must be distinct (both are {0})")]
    EqualPrimes(u64),
    #[error("{value} must be at least {min}")]
    TooSmall { value: u64, min: u64 },
    #[error("modulus L = {0} exceeds the supported limit 2^31")]
    ModulusTooLarge(u64),
    #[error("dense tables are limited to L <= {limit}, got L = {len}")]
    TableTooLarge { len: u64, limit: u64 },
    #[error("{g} is not a common primitive root of {p} and {q}")]
    NotCommonPrimitiveRoot { g: u64, p: u64, q: u64 },
    #[error("residue {value} is out of range [0, {modulus})")]
    OutOfRange { value: u64, modulus: u64 },
    #[error("index {index} is out of range [0, {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("sequence labels must differ (both are {0})")]
    SameLabel(usize),
    #[error("autocorrelation sidelobe prediction needs a nonzero shift")]
    ZeroShift,
    #[error("invalid sequence set: {0}")]
    InvalidSequenceSet(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
