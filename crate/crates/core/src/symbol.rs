use std::fmt;

use serde::Serialize;

use crate::error::CoreError;

/// An object or membrane-label name.
///
/// User symbols are ASCII identifiers starting with a letter. A single
/// leading underscore marks a *reserved* symbol: those are emitted by the
/// model generators and never written by hand.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Result<Self, CoreError> {
        let name = name.into();
        if Self::is_valid(&name) {
            Ok(Symbol(name))
        } else {
            Err(CoreError::InvalidSymbol(name))
        }
    }

    pub fn is_valid(name: &str) -> bool {
        let body = name.strip_prefix('_').unwrap_or(name);
        let mut chars = body.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for generator-owned symbols (leading underscore).
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::str::FromStr for Symbol {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::new(s)
    }
}
