//! Step semantics for mobile membrane systems.
//!
//! A step fires a *maximal* multiset of rule instances: reactants summed
//! per membrane must fit the pre-step contents, each membrane takes at most
//! one structural role (mover or host) across endo/exo instances, and no
//! further applicable instance can be added. Which maximal multiset is
//! chosen depends only on the seed.
//!
//! [`oracle_successors`] enumerates every maximal choice for small systems
//! and is written independently of [`step`] so the two can be compared.

mod arena;
mod error;
mod instances;
mod oracle;
mod rng;
mod run;
pub mod sample;
mod step;

pub use error::EngineError;
pub use instances::{enumerate_instances, is_jointly_applicable};
pub use oracle::oracle_successors;
pub use rng::{SplitMix64, RNG_NAME};
pub use run::{run, LabelState, Simulation, StepRecord, Trace};
pub use step::{step, Applied, EngineOptions, StepResult};
