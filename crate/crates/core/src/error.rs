use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("reduction polynomial is not irreducible")]
    NotIrreducible,
    #[error("field size {q} exceeds the supported maximum 2^16")]
    FieldTooLarge { q: u64 },
    #[error("invalid reduction polynomial: {0}")]
    InvalidReduction(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("syntax error in polynomial literal: {0}")]
    SyntaxError(String),
    #[error("coefficient {value} out of range for field of size {q}")]
    CoefficientOutOfRange { value: u64, q: u64 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("residue and modulus are not coprime")]
    NotCoprime,
    #[error("degree {degree} exceeds the sieve table bound {max_deg}")]
    DegreeExceedsTable { degree: usize, max_deg: usize },
    #[error("memory budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("pool {pool} holds {available} primes, {requested} requested")]
    PoolTooSmall {
        pool: usize,
        available: usize,
        requested: usize,
    },
    #[error("bad sieve file: {0}")]
    BadSieveFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
