//! Exhaustive successor enumeration for small systems.
//!
//! Shares nothing with the stepping code beyond the core value types: it
//! binds rules, tracks resources and applies effects on its own, so the
//! two can be checked against each other.

use std::collections::{BTreeMap, BTreeSet};

use mmsim_core::{CanonicalMembrane, Configuration, Multiset, Rule, RuleForm};

use crate::error::EngineError;

#[derive(Clone)]
struct Cell {
    label: mmsim_core::Symbol,
    contents: Multiset,
    parent: Option<u32>,
}

type Cells = BTreeMap<u32, Cell>;

#[derive(Clone, Copy)]
struct Inst {
    rule: usize,
    subject: u32,
    host: Option<u32>,
    /// Membrane reactants come from.
    from: u32,
    /// Membrane products go to.
    to: u32,
}

fn cells_of(config: &Configuration) -> Cells {
    config
        .walk()
        .into_iter()
        .map(|(m, parent)| {
            (
                m.id.0,
                Cell {
                    label: m.label.clone(),
                    contents: m.contents.clone(),
                    parent: parent.map(|p| p.0),
                },
            )
        })
        .collect()
}

fn instances(cells: &Cells, rules: &[Rule]) -> Vec<Inst> {
    let mut out = Vec::new();
    for (ri, rule) in rules.iter().enumerate() {
        for (&s, cell) in cells {
            if &cell.label != rule.subject() {
                continue;
            }
            if let Some(p) = rule.promoter() {
                if !cell.contents.contains(p) {
                    continue;
                }
            }
            let parent = cell.parent;
            let candidates: Vec<Inst> = match rule.form() {
                RuleForm::Rewrite => vec![Inst {
                    rule: ri,
                    subject: s,
                    host: None,
                    from: s,
                    to: s,
                }],
                RuleForm::SendIn => parent
                    .map(|p| Inst {
                        rule: ri,
                        subject: s,
                        host: None,
                        from: p,
                        to: s,
                    })
                    .into_iter()
                    .collect(),
                RuleForm::SendOut => parent
                    .map(|p| Inst {
                        rule: ri,
                        subject: s,
                        host: None,
                        from: s,
                        to: p,
                    })
                    .into_iter()
                    .collect(),
                RuleForm::Endo => cells
                    .iter()
                    .filter(|(&h, hc)| {
                        h != s
                            && parent.is_some()
                            && hc.parent == parent
                            && Some(&hc.label) == rule.host()
                    })
                    .map(|(&h, _)| Inst {
                        rule: ri,
                        subject: s,
                        host: Some(h),
                        from: s,
                        to: s,
                    })
                    .collect(),
                RuleForm::Exo => parent
                    .filter(|p| {
                        let pc = &cells[p];
                        Some(&pc.label) == rule.host() && pc.parent.is_some()
                    })
                    .map(|p| Inst {
                        rule: ri,
                        subject: s,
                        host: Some(p),
                        from: s,
                        to: s,
                    })
                    .into_iter()
                    .collect(),
            };
            out.extend(
                candidates
                    .into_iter()
                    .filter(|i| cells[&i.from].contents.contains(rule.consumed())),
            );
        }
    }
    out
}

struct Search<'a> {
    cells: &'a Cells,
    rules: &'a [Rule],
    insts: Vec<Inst>,
    /// `solo[i]`: no later instance competes with instance `i` for
    /// reactants or membranes, so taking fewer than the maximum of `i`
    /// can never end up maximal.
    solo: Vec<bool>,
    results: BTreeSet<CanonicalMembrane>,
}

#[derive(Clone, Default)]
struct Usage {
    used: BTreeMap<u32, Multiset>,
    movers: BTreeSet<u32>,
}

impl Search<'_> {
    fn structural(&self, i: &Inst) -> bool {
        matches!(self.rules[i.rule].form(), RuleForm::Endo | RuleForm::Exo)
    }

    /// How many more copies of instance `i` fit on top of `usage`.
    fn room(&self, usage: &Usage, i: &Inst) -> u64 {
        let consumed = self.rules[i.rule].consumed();
        let have = &self.cells[&i.from].contents;
        let empty = Multiset::new();
        let used = usage.used.get(&i.from).unwrap_or(&empty);
        let by_resources = consumed
            .iter()
            .map(|(s, n)| (have.count(s) - used.count(s)) / n)
            .min()
            .unwrap_or(0);
        if self.structural(i) {
            let free =
                !usage.movers.contains(&i.subject) && !usage.movers.contains(&i.host.unwrap());
            if free {
                by_resources.min(1)
            } else {
                0
            }
        } else {
            by_resources
        }
    }

    fn take(&self, usage: &mut Usage, i: &Inst, k: u64) {
        if k == 0 {
            return;
        }
        let extra = self.rules[i.rule].consumed().scaled(k).unwrap();
        usage
            .used
            .entry(i.from)
            .or_default()
            .add_in_place(&extra)
            .unwrap();
        if self.structural(i) {
            usage.movers.insert(i.subject);
            usage.movers.insert(i.host.unwrap());
        }
    }

    fn explore(&mut self, at: usize, usage: Usage, chosen: &mut Vec<u64>) {
        if at == self.insts.len() {
            if self.insts.iter().all(|i| self.room(&usage, i) == 0) {
                let next = self.apply(chosen);
                self.results.insert(next);
            }
            return;
        }
        let inst = self.insts[at];
        let max = self.room(&usage, &inst);
        let low = if self.solo[at] { max } else { 0 };
        for k in low..=max {
            let mut u = usage.clone();
            self.take(&mut u, &inst, k);
            chosen.push(k);
            self.explore(at + 1, u, chosen);
            chosen.pop();
        }
    }

    fn apply(&self, chosen: &[u64]) -> CanonicalMembrane {
        let mut cells = self.cells.clone();
        for (i, &k) in self.insts.iter().zip(chosen) {
            let r = &self.rules[i.rule];
            let c = r.consumed().scaled(k).unwrap();
            cells
                .get_mut(&i.from)
                .unwrap()
                .contents
                .sub_in_place(&c)
                .unwrap();
        }
        for (i, &k) in self.insts.iter().zip(chosen) {
            let r = &self.rules[i.rule];
            let p = r.produced().scaled(k).unwrap();
            cells
                .get_mut(&i.to)
                .unwrap()
                .contents
                .add_in_place(&p)
                .unwrap();
        }
        let mut new_parent = Vec::new();
        for (i, &k) in self.insts.iter().zip(chosen) {
            if k == 0 {
                continue;
            }
            match self.rules[i.rule].form() {
                RuleForm::Endo => new_parent.push((i.subject, i.host.unwrap())),
                RuleForm::Exo => {
                    new_parent.push((i.subject, self.cells[&i.host.unwrap()].parent.unwrap()))
                }
                _ => {}
            }
        }
        for (m, p) in new_parent {
            cells.get_mut(&m).unwrap().parent = Some(p);
        }
        let root = *cells.iter().find(|(_, c)| c.parent.is_none()).unwrap().0;
        canonical(&cells, root)
    }
}

fn canonical(cells: &Cells, at: u32) -> CanonicalMembrane {
    let mut children: Vec<CanonicalMembrane> = cells
        .iter()
        .filter(|(_, c)| c.parent == Some(at))
        .map(|(&id, _)| canonical(cells, id))
        .collect();
    children.sort();
    let cell = &cells[&at];
    CanonicalMembrane {
        label: cell.label.clone(),
        contents: cell.contents.clone(),
        children,
    }
}

fn competes(rules: &[Rule], a: &Inst, b: &Inst) -> bool {
    let shares_reactant = a.from == b.from
        && rules[a.rule]
            .consumed()
            .symbols()
            .any(|s| rules[b.rule].consumed().count(s) > 0);
    let structural = |i: &Inst| matches!(rules[i.rule].form(), RuleForm::Endo | RuleForm::Exo);
    let shares_membrane = structural(a) && structural(b) && {
        let ra = [a.subject, a.host.unwrap()];
        let rb = [b.subject, b.host.unwrap()];
        ra.iter().any(|x| rb.contains(x))
    };
    shares_reactant || shares_membrane
}

/// All configurations reachable in one maximally parallel step, in
/// canonical form. A halting configuration is its own only successor.
///
/// Fails if more than `bound` instances are individually applicable.
pub fn oracle_successors(
    config: &Configuration,
    rules: &[Rule],
    bound: usize,
) -> Result<BTreeSet<CanonicalMembrane>, EngineError> {
    let cells = cells_of(config);
    let insts = instances(&cells, rules);
    if insts.len() > bound {
        return Err(EngineError::OracleBound {
            found: insts.len(),
            bound,
        });
    }
    let solo = (0..insts.len())
        .map(|i| !insts[i + 1..].iter().any(|j| competes(rules, &insts[i], j)))
        .collect();
    let mut search = Search {
        cells: &cells,
        rules,
        insts,
        solo,
        results: BTreeSet::new(),
    };
    search.explore(0, Usage::default(), &mut Vec::new());
    Ok(search.results)
}
