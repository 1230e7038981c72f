use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {q} is not totally split in the field")]
    NotSplit { q: u64 },
    #[error("element is not integral at the place above {q}")]
    NonIntegral { q: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular Weierstrass model")]
    Singular,
    #[error("no good model at the place above {q}")]
    NoGoodModel { q: u64 },
    #[error("invalid (e, r) pair ({e}, {r}) for the local exponent table")]
    InvalidExponentPair { e: u32, r: u32 },
    #[error("case {case} is incompatible with the field: {reason}")]
    IncompatibleCase { case: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
