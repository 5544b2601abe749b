use thiserror::Error;

/// Errors raised by the size-biased order library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range (valid: 1..={len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("size w({index}) is not representable as a positive finite f64")]
    Unrepresentable { index: usize },

    #[error("invalid size function: {0}")]
    InvalidDescriptor(String),

    #[error("size must be positive and finite, got {0}")]
    NonPositiveSize(f64),

    #[error("analytic metadata is unavailable for {0}")]
    UnsupportedFamily(&'static str),

    #[error("size function does not diverge to infinity: {0}")]
    FamilyNotDivergent(&'static str),

    #[error("invalid Lehmer code: rank {rank} at position {position}")]
    InvalidCode { position: usize, rank: usize },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("metadata incomplete: {0}")]
    IncompleteMetadata(&'static str),

    #[error("metadata is heuristic; pass an explicit override to use it here")]
    HeuristicMetadata,

    #[error("state space too large: {labels} labels (max {max})")]
    TooLargeStateSpace { labels: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
