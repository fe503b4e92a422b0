use mmsim_core::{CoreError, Violation};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("more than {limit} rule instances in one step; the model is probably runaway")]
    InstanceBound { limit: u64 },

    #[error("object count overflow: {0}")]
    Overflow(CoreError),

    /// Should never happen; indicates an engine bug.
    #[error("internal engine error: {0}")]
    Internal(String),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("{found} applicable instances exceed the oracle bound of {bound}")]
    OracleBound { found: usize, bound: usize },

    #[error("invalid configuration: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidConfiguration(Vec<Violation>),
}
