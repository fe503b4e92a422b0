use std::collections::{HashMap, HashSet};

use mmsim_core::{Configuration, Multiset, Rule, RuleForm, RuleInstance};

use crate::arena::Arena;

/// A rule bound to arena nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Binding {
    pub rule: usize,
    pub subject: usize,
    pub host: Option<usize>,
    pub parent: Option<usize>,
}

impl Binding {
    /// Node the reactants are taken from.
    pub fn source(&self, rules: &[Rule]) -> usize {
        if rules[self.rule].consumes_from_parent() {
            self.parent.expect("send-in bindings always have a parent")
        } else {
            self.subject
        }
    }

    /// Node the products are put into.
    pub fn target(&self, rules: &[Rule]) -> usize {
        if rules[self.rule].produces_into_parent() {
            self.parent.expect("send-out bindings always have a parent")
        } else {
            self.subject
        }
    }

    pub fn to_instance(self, arena: &Arena, rules: &[Rule]) -> RuleInstance {
        RuleInstance {
            rule: rules[self.rule].id().to_string(),
            subject: arena.nodes[self.subject].id,
            host: self.host.map(|h| arena.nodes[h].id),
            parent: self.parent.map(|p| arena.nodes[p].id),
        }
    }
}

fn promoter_ok(rule: &Rule, arena: &Arena, subject: usize) -> bool {
    rule.promoter()
        .is_none_or(|p| arena.nodes[subject].contents.contains(p))
}

/// Every individually applicable binding, ordered by rule, subject id,
/// then host id.
pub(crate) fn enumerate(arena: &Arena, rules: &[Rule]) -> Vec<Binding> {
    let order = arena.by_id();
    let mut out = Vec::new();
    for (ri, rule) in rules.iter().enumerate() {
        for &s in &order {
            let node = &arena.nodes[s];
            if &node.label != rule.subject() || !promoter_ok(rule, arena, s) {
                continue;
            }
            let parent = node.parent;
            let own = |b: Binding| {
                arena.nodes[b.source(rules)]
                    .contents
                    .contains(rule.consumed())
            };
            match rule.form() {
                RuleForm::Rewrite => {
                    let b = Binding {
                        rule: ri,
                        subject: s,
                        host: None,
                        parent,
                    };
                    if own(b) {
                        out.push(b);
                    }
                }
                RuleForm::SendIn | RuleForm::SendOut => {
                    if parent.is_none() {
                        continue;
                    }
                    let b = Binding {
                        rule: ri,
                        subject: s,
                        host: None,
                        parent,
                    };
                    if own(b) {
                        out.push(b);
                    }
                }
                RuleForm::Endo => {
                    let Some(p) = parent else { continue };
                    if !node.contents.contains(rule.consumed()) {
                        continue;
                    }
                    let mut hosts: Vec<usize> = arena.nodes[p]
                        .children
                        .iter()
                        .copied()
                        .filter(|&h| h != s && Some(&arena.nodes[h].label) == rule.host())
                        .collect();
                    hosts.sort_by_key(|&h| arena.nodes[h].id);
                    for h in hosts {
                        out.push(Binding {
                            rule: ri,
                            subject: s,
                            host: Some(h),
                            parent,
                        });
                    }
                }
                RuleForm::Exo => {
                    let Some(p) = parent else { continue };
                    // Leaving the skin is not possible.
                    if arena.nodes[p].parent.is_none() || Some(&arena.nodes[p].label) != rule.host()
                    {
                        continue;
                    }
                    if node.contents.contains(rule.consumed()) {
                        out.push(Binding {
                            rule: ri,
                            subject: s,
                            host: Some(p),
                            parent,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Re-derives a binding from a [`RuleInstance`], checking that it really is
/// an individually applicable instance of a known rule.
pub(crate) fn bind(
    arena: &Arena,
    rules: &[Rule],
    rule_index: &HashMap<&str, usize>,
    inst: &RuleInstance,
) -> Option<Binding> {
    let ri = *rule_index.get(inst.rule.as_str())?;
    let s = arena.node(inst.subject)?;
    let host = match inst.host {
        Some(h) => Some(arena.node(h)?),
        None => None,
    };
    let parent = arena.nodes[s].parent;
    if inst.parent.map(|p| arena.node(p)) != parent.map(Some) {
        return None;
    }
    let wanted = Binding {
        rule: ri,
        subject: s,
        host,
        parent,
    };
    enumerate_for(arena, rules, ri, s)
        .into_iter()
        .find(|b| *b == wanted)
}

fn enumerate_for(arena: &Arena, rules: &[Rule], ri: usize, s: usize) -> Vec<Binding> {
    enumerate(arena, std::slice::from_ref(&rules[ri]))
        .into_iter()
        .filter(|b| b.subject == s)
        .map(|b| Binding { rule: ri, ..b })
        .collect()
}

pub(crate) fn rule_index(rules: &[Rule]) -> HashMap<&str, usize> {
    rules.iter().enumerate().map(|(i, r)| (r.id(), i)).collect()
}

/// Resource and mover-lock bookkeeping for a growing instance multiset.
pub(crate) struct Ledger<'a> {
    arena: &'a Arena,
    rules: &'a [Rule],
    used: HashMap<usize, Multiset>,
    locked: HashSet<usize>,
}

impl<'a> Ledger<'a> {
    pub fn new(arena: &'a Arena, rules: &'a [Rule]) -> Self {
        Ledger {
            arena,
            rules,
            used: HashMap::new(),
            locked: HashSet::new(),
        }
    }

    fn roles(&self, b: &Binding) -> Option<[usize; 2]> {
        if self.rules[b.rule].form().is_structural() {
            Some([b.subject, b.host.expect("structural bindings have a host")])
        } else {
            None
        }
    }

    /// Whether `k` more copies of `b` fit.
    pub fn fits(&self, b: &Binding, k: u64) -> bool {
        if k == 0 {
            return true;
        }
        if let Some(roles) = self.roles(b) {
            if k > 1 || roles.iter().any(|r| self.locked.contains(r)) {
                return false;
            }
        }
        let src = b.source(self.rules);
        let have = &self.arena.nodes[src].contents;
        let used = self.used.get(&src);
        self.rules[b.rule].consumed().iter().all(|(sym, n)| {
            let already = used.map_or(0, |u| u.count(sym));
            n.checked_mul(k)
                .and_then(|need| need.checked_add(already))
                .is_some_and(|total| total <= have.count(sym))
        })
    }

    /// Largest number of further copies of `b` that fit.
    pub fn room(&self, b: &Binding) -> u64 {
        if let Some(roles) = self.roles(b) {
            if roles.iter().any(|r| self.locked.contains(r)) {
                return 0;
            }
        }
        let src = b.source(self.rules);
        let have = &self.arena.nodes[src].contents;
        let used = self.used.get(&src);
        let by_resources = self.rules[b.rule]
            .consumed()
            .iter()
            .map(|(sym, n)| (have.count(sym) - used.map_or(0, |u| u.count(sym))) / n)
            .min()
            .unwrap_or(0);
        if self.roles(b).is_some() {
            by_resources.min(1)
        } else {
            by_resources
        }
    }

    /// Adds `k` copies if they fit; returns whether they did.
    pub fn try_add(&mut self, b: &Binding, k: u64) -> bool {
        if !self.fits(b, k) {
            return false;
        }
        if k == 0 {
            return true;
        }
        if let Some(roles) = self.roles(b) {
            self.locked.extend(roles);
        }
        let src = b.source(self.rules);
        let extra = self.rules[b.rule]
            .consumed()
            .scaled(k)
            .expect("fits() checked overflow");
        self.used
            .entry(src)
            .or_default()
            .add_in_place(&extra)
            .expect("fits() checked overflow");
        true
    }
}

/// Joint applicability of an instance multiset against `config`: summed
/// reactants fit every membrane, and no membrane takes more than one
/// structural role (mover or host) across endo/exo instances.
pub fn is_jointly_applicable(
    config: &Configuration,
    rules: &[Rule],
    instances: &[(RuleInstance, u64)],
) -> bool {
    let arena = Arena::from_config(config);
    let index = rule_index(rules);
    let mut ledger = Ledger::new(&arena, rules);
    for (inst, k) in instances {
        let Some(b) = bind(&arena, rules, &index, inst) else {
            return false;
        };
        if !ledger.try_add(&b, *k) {
            return false;
        }
    }
    true
}

/// Every individually applicable rule instance, ordered by rule, subject
/// id, then host id.
pub fn enumerate_instances(config: &Configuration, rules: &[Rule]) -> Vec<RuleInstance> {
    let arena = Arena::from_config(config);
    enumerate(&arena, rules)
        .iter()
        .map(|b| b.to_instance(&arena, rules))
        .collect()
}
