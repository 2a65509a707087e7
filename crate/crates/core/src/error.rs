use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid cycle type: {0}")]
    InvalidCycleType(String),

    #[error("S_{n} has no element of order {m}")]
    EmptyOrder { n: usize, m: u64 },

    #[error("the generated group is not transitive")]
    NotTransitive,

    #[error("degree {n} exceeds the order-oracle limit {limit}")]
    OracleLimitExceeded { n: usize, limit: usize },

    #[error("k = {k} exceeds the exact-evaluation limit {limit}")]
    ExactLimitExceeded { k: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True for the errors that signal a computation limit rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::OracleLimitExceeded { .. } | Error::ExactLimitExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
