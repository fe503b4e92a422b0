//! Text format for mobile membrane models.
//!
//! ```text
//! # comment
//! [skin:
//!   [T: c*10]
//!   [CU: [BMU: ] [V: p0]]
//! ]
//! rule r1: exo V from CU: p0 -> p1
//! rule r2: send-in V: c -> cl if p2
//! rule r3: send-out V: cl -> () if p6
//! ```
//!
//! A model is one membrane tree followed by rules. `sym*n` gives a count
//! (n ≥ 1), `()` is the empty right-hand side, and `if` introduces a
//! promoter. Membrane ids are assigned in pre-order from 0.

mod error;
mod lexer;
mod lint;
mod parse;
mod print;

pub use error::ParseError;
pub use lint::{lint, Warning};
pub use mmsim_core::Model;
pub use parse::{
    parse_model, parse_model_bytes, parse_model_with_source_map, SourceMap, MAX_DEPTH,
};
pub use print::{rule_line, serialize_model};
