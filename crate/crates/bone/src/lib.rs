//! Bone remodelling on two scales.
//!
//! Tissue density is a count of `c` tokens out of a capacity `D`. Each
//! macro-cycle the carrier takes the tissue's tokens to the BMU, where
//! osteoclast tokens resorb delivered mineral into free slots and
//! osteoblast tokens refill free slots with new mineral, then brings the
//! result back. Everything is an ordinary membrane model.

mod density;
mod error;
mod model;
mod series;

pub use density::{decode_density, encode_density, format_density, parse_density, Density};
pub use error::BoneError;
pub use model::{
    build_bone_model, micro_rules, unit_spec, BoneParams, UnitParams, DEFAULT_CAPACITY, FREE,
    OSTEOBLAST, OSTEOCLAST,
};
pub use series::{density_series, simulate, unit_tokens, BoneRun};
