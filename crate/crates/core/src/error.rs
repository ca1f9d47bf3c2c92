use thiserror::Error;

/// Errors raised by the p-adic machinery and the evaluation pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: must be an odd prime")]
    InvalidPrime(u64),
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("element is not a p-adic unit")]
    NonUnit,
    #[error("series constant term is not a unit")]
    NonInvertibleSeries,
    #[error("invalid exponent {0}: denominator divisible by p")]
    InvalidExponent(String),
    #[error("invalid Frobenius twist: c must be congruent to 1 mod p")]
    InvalidTwist,
    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid root-of-unity order {0}: divisible by p")]
    InvalidOrder(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid evaluation point: {0}")]
    InvalidPoint(String),
    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(String),
    #[error("degenerate eigenvector: second coordinate is not a unit")]
    DegenerateEigenvector,
    #[error("nonvanishing condition fails at orbit index {index}")]
    ConditionViolated { index: usize },
    #[error("oracle budget exceeded: {terms} terms requested, cap {cap}")]
    BudgetExceeded { terms: u128, cap: u64 },
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
