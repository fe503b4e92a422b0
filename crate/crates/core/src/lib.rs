//! Value types for mobile membrane systems.
//!
//! A system state is a [`Configuration`]: a rooted tree of labelled
//! [`Membrane`]s, each holding a [`Multiset`] of objects. Evolution is
//! described by [`Rule`]s in five forms (local rewriting, endocytosis,
//! exocytosis and parent/child object transfer), bound to concrete
//! membranes as [`RuleInstance`]s by the engine.
//!
//! Every type here is an immutable value once built; operations that
//! "modify" return new values.

mod error;
mod membrane;
mod model;
mod multiset;
mod rule;
mod symbol;

pub use error::CoreError;
pub use membrane::{CanonicalMembrane, Configuration, Layout, Membrane, MembraneId, Violation};
pub use model::Model;
pub use multiset::Multiset;
pub use rule::{Rule, RuleForm, RuleInstance};
pub use symbol::Symbol;
