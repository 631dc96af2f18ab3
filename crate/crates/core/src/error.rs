use thiserror::Error;

/// Errors produced across the codec, optimizer and simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate nodes: minimum pairwise gap {gap:e} is below 1e-12")]
    DegenerateNodes { gap: f64 },

    #[error("partition sizes sum to {actual}, expected {expected}")]
    PartitionSum { expected: usize, actual: usize },

    #[error("recovery threshold {threshold} exceeds worker count {workers}")]
    InfeasibleThreshold { threshold: usize, workers: usize },

    #[error("insufficient results: need {needed}, got {got} (deficit {})", .needed - .got)]
    InsufficientResults { needed: usize, got: usize },

    #[error("set {set} with {size} subtasks is infeasible: {reason}")]
    InfeasibleSet {
        set: usize,
        size: usize,
        reason: String,
    },

    #[error("infeasible model: {0}")]
    InfeasibleModel(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("search space of {count} candidates exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that stem from an infeasible configuration rather than
    /// a bug or a numeric breakdown.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleThreshold { .. }
                | Error::InfeasibleSet { .. }
                | Error::InfeasibleModel(_)
                | Error::PartitionSum { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
