use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^16")]
    NotPrime(u64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: p = {expected} vs p = {found}")]
    FieldMismatch { expected: u32, found: u32 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vectors are linearly dependent")]
    DependentBasis,

    #[error("form is not generic on this subspace: no dual tuple exists in the ambient space")]
    NotGenericHere,

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("target ambient space exhausted: {0}")]
    TargetExhausted(String),

    #[error("insufficient headroom: need {needed}, ambient offers {available}")]
    InsufficientHeadroom { needed: usize, available: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration too large: {required} candidates exceed budget {budget}")]
    TooLarge { required: u128, budget: u128 },

    #[error("search budget of {0} candidates exceeded")]
    BudgetExceeded(u128),

    #[error("size guard violated: {0}")]
    SizeGuard(String),
}

impl Error {
    /// True for failures caused by enumeration budgets and size guards rather than by the input data.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::TooLarge { .. } | Error::BudgetExceeded(_) | Error::SizeGuard(_)
        )
    }
}
