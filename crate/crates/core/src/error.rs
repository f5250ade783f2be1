use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("invalid degree: m = {m}, n = {n} (need m >= 1, n >= 2)")]
    InvalidDegree { m: u32, n: u32 },
    #[error("field of order {p}^{degree} exceeds the size limit {limit}")]
    FieldTooLarge { p: u32, degree: u32, limit: u64 },
    #[error("modulus must have {expected} coefficients, got {actual}")]
    ModulusLength { expected: usize, actual: usize },
    #[error("modulus must be monic")]
    ModulusNotMonic,
    #[error("modulus coefficient {coefficient} is not reduced mod {p}")]
    CoefficientOutOfRange { coefficient: u32, p: u32 },
    #[error("modulus is reducible over GF({p})")]
    Reducible { p: u32 },
    #[error("modulus is irreducible but its root is not primitive")]
    NotPrimitive,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("value {0} does not lie in the subfield GF(q)")]
    NotInSubfield(String),
    #[error("function table has {actual} values, expected {expected}")]
    TableLength { expected: usize, actual: usize },
    #[error("parameter mismatch: {0}")]
    Parameters(String),
    #[error("construction failed validation: {0}")]
    Validation(String),
    #[error("invalid subgroup: {0}")]
    Subgroup(String),
    #[error("search budget exceeded: {candidates} candidates > budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("checkpoint does not match the search configuration: {0}")]
    CheckpointMismatch(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
