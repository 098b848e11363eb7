use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),

    #[error("form ({0}, {1}, {2}) is not positive definite")]
    NotPositiveDefinite(i64, i64, i64),

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("composition left the supplied element set")]
    NotClosed,

    #[error("invalid invariant-factor chain {0:?}")]
    InvalidChain(Vec<u64>),

    #[error("{h} does not divide {n}")]
    NotDivisor { h: u64, n: u64 },

    #[error("{p} divides the character order {h}")]
    CharacteristicDividesOrder { p: u64, h: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("discriminant {0} has extra units; the theta oracle needs D < -4")]
    ExtraUnits(i64),

    #[error("bound {requested} exceeds the configured budget of {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
