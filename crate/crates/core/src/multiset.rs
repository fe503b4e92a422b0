use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::CoreError;
use crate::symbol::Symbol;

/// A finite multiset of objects.
///
/// Entries are kept in lexicographic symbol order and never hold a zero
/// count, except when built through [`Multiset::from_raw`].
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Multiset(BTreeMap<Symbol, u64>);

impl Multiset {
    pub fn new() -> Self {
        Multiset(BTreeMap::new())
    }

    pub fn singleton(symbol: Symbol, count: u64) -> Self {
        let mut m = Multiset::new();
        if count > 0 {
            m.0.insert(symbol, count);
        }
        m
    }

    /// Builds a multiset from `(name, count)` pairs; zero counts are skipped
    /// and repeated names accumulate.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (&'a str, u64)>,
    {
        let mut m = Multiset::new();
        for (name, count) in pairs {
            m.insert(Symbol::new(name)?, count)?;
        }
        Ok(m)
    }

    /// Wraps a raw map without dropping zero entries. Only useful for
    /// exercising validators with deliberately broken values.
    pub fn from_raw(entries: BTreeMap<Symbol, u64>) -> Self {
        Multiset(entries)
    }

    pub fn is_empty(&self) -> bool {
        self.0.values().all(|&n| n == 0)
    }

    /// Number of distinct symbols.
    pub fn distinct(&self) -> usize {
        self.0.len()
    }

    /// Total number of objects (saturating).
    pub fn total(&self) -> u64 {
        self.0.values().fold(0u64, |acc, &n| acc.saturating_add(n))
    }

    pub fn count(&self, symbol: &Symbol) -> u64 {
        self.0.get(symbol).copied().unwrap_or(0)
    }

    /// Count lookup by name; unknown or malformed names count as zero.
    pub fn count_of(&self, name: &str) -> u64 {
        self.0
            .iter()
            .find(|(s, _)| s.as_str() == name)
            .map(|(_, &n)| n)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, u64)> + '_ {
        self.0.iter().map(|(s, &n)| (s, n))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.0.keys()
    }

    /// Symbols stored with a zero count (always empty for well-formed values).
    pub fn zero_entries(&self) -> Vec<&Symbol> {
        self.0
            .iter()
            .filter(|(_, &n)| n == 0)
            .map(|(s, _)| s)
            .collect()
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Multiset) -> bool {
        other.0.iter().all(|(s, &n)| self.count(s) >= n)
    }

    pub fn checked_add(&self, other: &Multiset) -> Result<Multiset, CoreError> {
        let mut out = self.clone();
        out.add_in_place(other)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Multiset) -> Result<Multiset, CoreError> {
        let mut out = self.clone();
        out.sub_in_place(other)?;
        Ok(out)
    }

    /// `k` copies of `self`.
    pub fn scaled(&self, k: u64) -> Result<Multiset, CoreError> {
        let mut out = Multiset::new();
        if k == 0 {
            return Ok(out);
        }
        for (s, &n) in &self.0 {
            let v = n.checked_mul(k).ok_or_else(|| CoreError::Overflow {
                symbol: s.to_string(),
            })?;
            if v > 0 {
                out.0.insert(s.clone(), v);
            }
        }
        Ok(out)
    }

    /// Adds `count` copies of `symbol` to a working copy.
    pub fn insert(&mut self, symbol: Symbol, count: u64) -> Result<(), CoreError> {
        if count == 0 {
            return Ok(());
        }
        match self.0.entry(symbol) {
            btree_map::Entry::Vacant(e) => {
                e.insert(count);
            }
            btree_map::Entry::Occupied(mut e) => {
                let v = e
                    .get()
                    .checked_add(count)
                    .ok_or_else(|| CoreError::Overflow {
                        symbol: e.key().to_string(),
                    })?;
                *e.get_mut() = v;
            }
        }
        Ok(())
    }

    /// Removes `count` copies of `symbol` from a working copy.
    pub fn remove(&mut self, symbol: &Symbol, count: u64) -> Result<(), CoreError> {
        if count == 0 {
            return Ok(());
        }
        let have = self.count(symbol);
        if have < count {
            return Err(CoreError::Underflow {
                symbol: symbol.to_string(),
                have,
                need: count,
            });
        }
        if have == count {
            self.0.remove(symbol);
        } else {
            self.0.insert(symbol.clone(), have - count);
        }
        Ok(())
    }

    pub fn add_in_place(&mut self, other: &Multiset) -> Result<(), CoreError> {
        // Checked up front so a failed add leaves `self` untouched.
        for (s, &n) in &other.0 {
            if self.count(s).checked_add(n).is_none() {
                return Err(CoreError::Overflow {
                    symbol: s.to_string(),
                });
            }
        }
        for (s, &n) in &other.0 {
            self.insert(s.clone(), n)?;
        }
        Ok(())
    }

    pub fn sub_in_place(&mut self, other: &Multiset) -> Result<(), CoreError> {
        for (s, &n) in &other.0 {
            let have = self.count(s);
            if have < n {
                return Err(CoreError::Underflow {
                    symbol: s.to_string(),
                    have,
                    need: n,
                });
            }
        }
        for (s, &n) in &other.0 {
            self.remove(s, n)?;
        }
        Ok(())
    }
}

impl fmt::Display for Multiset {
    /// Canonical text form: `a*2, b` (count 1 is implicit).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, &n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if n == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}*{n}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl<'a> IntoIterator for &'a Multiset {
    type Item = (&'a Symbol, &'a u64);
    type IntoIter = btree_map::Iter<'a, Symbol, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
