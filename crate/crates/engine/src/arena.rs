use std::collections::HashMap;

use mmsim_core::{Configuration, Membrane, MembraneId, Multiset, Symbol};

/// Flat, index-addressed working copy of a configuration.
#[derive(Clone, Debug)]
pub(crate) struct Arena {
    pub nodes: Vec<Node>,
    pub index: HashMap<MembraneId, usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub id: MembraneId,
    pub label: Symbol,
    pub contents: Multiset,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl Arena {
    pub fn from_config(config: &Configuration) -> Self {
        let mut arena = Arena {
            nodes: Vec::new(),
            index: HashMap::new(),
        };
        arena.push(config.skin(), None);
        arena
    }

    fn push(&mut self, m: &Membrane, parent: Option<usize>) -> usize {
        let at = self.nodes.len();
        self.nodes.push(Node {
            id: m.id,
            label: m.label.clone(),
            contents: m.contents.clone(),
            parent,
            children: Vec::with_capacity(m.children.len()),
        });
        self.index.insert(m.id, at);
        for child in &m.children {
            let c = self.push(child, Some(at));
            self.nodes[at].children.push(c);
        }
        at
    }

    pub fn node(&self, id: MembraneId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Node indices ordered by membrane id.
    pub fn by_id(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&i| self.nodes[i].id);
        order
    }

    pub fn reparent(&mut self, node: usize, new_parent: usize) {
        if let Some(old) = self.nodes[node].parent {
            self.nodes[old].children.retain(|&c| c != node);
        }
        self.nodes[new_parent].children.push(node);
        self.nodes[node].parent = Some(new_parent);
    }

    pub fn to_config(&self) -> Configuration {
        Configuration::new_unchecked(self.build(0))
    }

    fn build(&self, at: usize) -> Membrane {
        let n = &self.nodes[at];
        Membrane {
            id: n.id,
            label: n.label.clone(),
            contents: n.contents.clone(),
            children: n.children.iter().map(|&c| self.build(c)).collect(),
        }
    }
}
