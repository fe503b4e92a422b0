use mmsim_core::CoreError;
use mmsim_coupling::CouplingError;
use mmsim_engine::EngineError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoneError {
    #[error("density `{0}` is outside [0, 1]")]
    DensityRange(String),
    #[error("`{0}` is not a density (expected e.g. 0.4 or 2/5)")]
    DensitySyntax(String),
    #[error("capacity must be at least 1")]
    Capacity,
    #[error("{n} tokens exceed capacity {capacity}")]
    TokensRange { n: u64, capacity: u64 },
    #[error("a bone model needs at least one unit")]
    NoUnits,
    #[error("unit {unit} is not in the model (units are numbered from 1)")]
    UnitOutOfRange { unit: usize },
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
