use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::CoreError;
use crate::multiset::Multiset;
use crate::symbol::Symbol;

/// Identity of a membrane, unique within one configuration and stable
/// across steps.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct MembraneId(pub u32);

impl fmt::Display for MembraneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Membrane {
    pub id: MembraneId,
    pub label: Symbol,
    pub contents: Multiset,
    /// Stored order only matters for serialization.
    pub children: Vec<Membrane>,
}

impl Membrane {
    pub fn new(id: MembraneId, label: Symbol, contents: Multiset) -> Self {
        Membrane {
            id,
            label,
            contents,
            children: Vec::new(),
        }
    }

    pub fn with_child(mut self, child: Membrane) -> Self {
        self.children.push(child);
        self
    }

    fn preorder<'a>(
        &'a self,
        parent: Option<MembraneId>,
        out: &mut Vec<(&'a Membrane, Option<MembraneId>)>,
    ) {
        out.push((self, parent));
        for child in &self.children {
            child.preorder(Some(self.id), out);
        }
    }
}

/// An id-less membrane tree; ids are assigned in pre-order when it is
/// turned into a [`Configuration`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Layout {
    pub label: Symbol,
    pub contents: Multiset,
    pub children: Vec<Layout>,
}

impl Layout {
    pub fn new(label: Symbol) -> Self {
        Layout {
            label,
            contents: Multiset::new(),
            children: Vec::new(),
        }
    }

    pub fn with_contents(mut self, contents: Multiset) -> Self {
        self.contents = contents;
        self
    }

    pub fn with_child(mut self, child: Layout) -> Self {
        self.children.push(child);
        self
    }

    fn build(&self, next: &mut u32) -> Membrane {
        let id = MembraneId(*next);
        *next += 1;
        Membrane {
            id,
            label: self.label.clone(),
            contents: self.contents.clone(),
            children: self.children.iter().map(|c| c.build(next)).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    DuplicateId(MembraneId),
    ZeroCount {
        membrane: MembraneId,
        symbol: Symbol,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "membrane id {id} occurs more than once"),
            Violation::ZeroCount { membrane, symbol } => {
                write!(f, "membrane {membrane} stores a zero count for `{symbol}`")
            }
        }
    }
}

/// The full system state: a tree of membranes rooted at the skin.
///
/// Acyclicity holds by construction (children are owned values); the
/// remaining structural invariants are checked by [`Configuration::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Configuration {
    skin: Membrane,
}

impl Configuration {
    pub fn new(skin: Membrane) -> Result<Self, Vec<Violation>> {
        let config = Configuration { skin };
        config.validate()?;
        Ok(config)
    }

    /// Skips validation. Used by tests that need broken values.
    pub fn new_unchecked(skin: Membrane) -> Self {
        Configuration { skin }
    }

    pub fn from_layout(layout: &Layout) -> Self {
        let mut next = 0;
        Configuration {
            skin: layout.build(&mut next),
        }
    }

    pub fn skin(&self) -> &Membrane {
        &self.skin
    }

    pub fn into_skin(self) -> Membrane {
        self.skin
    }

    /// All membranes in pre-order with their parent ids.
    pub fn walk(&self) -> Vec<(&Membrane, Option<MembraneId>)> {
        let mut out = Vec::new();
        self.skin.preorder(None, &mut out);
        out
    }

    pub fn membrane(&self, id: MembraneId) -> Option<&Membrane> {
        self.walk()
            .into_iter()
            .find(|(m, _)| m.id == id)
            .map(|(m, _)| m)
    }

    pub fn membrane_count(&self) -> usize {
        self.walk().len()
    }

    pub fn find_membranes(&self, label: &Symbol) -> Vec<MembraneId> {
        self.walk()
            .into_iter()
            .filter(|(m, _)| &m.label == label)
            .map(|(m, _)| m.id)
            .collect()
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut seen = HashSet::new();
        let mut reported = HashSet::new();
        let mut violations = Vec::new();
        for (m, _) in self.walk() {
            if !seen.insert(m.id) && reported.insert(m.id) {
                violations.push(Violation::DuplicateId(m.id));
            }
            for symbol in m.contents.zero_entries() {
                violations.push(Violation::ZeroCount {
                    membrane: m.id,
                    symbol: symbol.clone(),
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn total_objects(&self) -> u64 {
        self.walk()
            .iter()
            .fold(0u64, |acc, (m, _)| acc.saturating_add(m.contents.total()))
    }

    /// Contents summed per label.
    pub fn label_totals(&self) -> Result<BTreeMap<Symbol, Multiset>, CoreError> {
        let mut out: BTreeMap<Symbol, Multiset> = BTreeMap::new();
        for (m, _) in self.walk() {
            out.entry(m.label.clone())
                .or_default()
                .add_in_place(&m.contents)?;
        }
        Ok(out)
    }

    /// Id-free form used to compare configurations up to membrane identity
    /// and child order.
    pub fn canonical(&self) -> CanonicalMembrane {
        CanonicalMembrane::from_membrane(&self.skin)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalMembrane {
    pub label: Symbol,
    pub contents: Multiset,
    /// Sorted.
    pub children: Vec<CanonicalMembrane>,
}

impl CanonicalMembrane {
    pub fn from_membrane(m: &Membrane) -> Self {
        let mut children: Vec<_> = m.children.iter().map(Self::from_membrane).collect();
        children.sort();
        CanonicalMembrane {
            label: m.label.clone(),
            contents: m.contents.clone(),
            children,
        }
    }
}

impl fmt::Display for CanonicalMembrane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}: {}", self.label, self.contents)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        f.write_str("]")
    }
}
