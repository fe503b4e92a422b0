use mmsim_core::{Configuration, Rule, RuleForm, RuleInstance};
use serde::Serialize;

use crate::arena::Arena;
use crate::error::EngineError;
use crate::instances::{enumerate, is_jointly_applicable, Binding, Ledger};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub seed: u64,
    /// Upper bound on instances (counted with multiplicity) in one step.
    pub max_instances_per_step: u64,
    /// Re-verify joint applicability, maximality and validity after each step.
    pub self_check: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            seed: 0,
            max_instances_per_step: 1_000_000,
            self_check: true,
        }
    }
}

impl EngineOptions {
    pub fn with_seed(seed: u64) -> Self {
        EngineOptions {
            seed,
            ..Default::default()
        }
    }
}

/// One rule instance and how many times it fired.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Applied {
    pub instance: RuleInstance,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    pub config: Configuration,
    /// In enumeration order.
    pub applied: Vec<Applied>,
    pub halted: bool,
}

impl StepResult {
    pub fn total_applied(&self) -> u64 {
        self.applied.iter().map(|a| a.count).sum()
    }
}

/// One maximally parallel step.
///
/// Enumerated instances are shuffled with `rng`, then added greedily pass
/// after pass until a full pass adds nothing; each visit adds a random
/// number of copies between one and as many as still fit. The result is
/// some maximal multiset, reproducible from the generator state. Every
/// maximal multiset has a positive probability, but the distribution is
/// not uniform.
///
/// Reactants are taken from the pre-step state, then products are added,
/// then membranes move according to their pre-step bindings.
pub fn step(
    config: &Configuration,
    rules: &[Rule],
    rng: &mut SplitMix64,
    options: &EngineOptions,
) -> Result<StepResult, EngineError> {
    let arena = Arena::from_config(config);
    let candidates = enumerate(&arena, rules);
    if candidates.len() as u64 > options.max_instances_per_step {
        return Err(EngineError::InstanceBound {
            limit: options.max_instances_per_step,
        });
    }

    let mut order: Vec<usize> = (0..candidates.len()).collect();
    rng.shuffle(&mut order);

    let mut counts = vec![0u64; candidates.len()];
    let mut total = 0u64;
    let mut ledger = Ledger::new(&arena, rules);
    let mut active = order;
    loop {
        let mut added = false;
        let mut still = Vec::with_capacity(active.len());
        for i in active {
            // Resources only shrink and locks only grow, so an instance with
            // no room now never gets any again.
            let room = ledger.room(&candidates[i]);
            if room == 0 {
                continue;
            }
            // A random batch rather than a single copy, so that every maximal
            // multiset can come out of some shuffle.
            let k = 1 + rng.below(room);
            if !ledger.try_add(&candidates[i], k) {
                return Err(EngineError::Internal("ledger room/fit disagreement".into()));
            }
            counts[i] += k;
            total = total.saturating_add(k);
            if total > options.max_instances_per_step {
                return Err(EngineError::InstanceBound {
                    limit: options.max_instances_per_step,
                });
            }
            added = true;
            still.push(i);
        }
        active = still;
        if !added {
            break;
        }
    }

    let chosen: Vec<(Binding, u64)> = candidates
        .iter()
        .zip(&counts)
        .filter(|(_, &k)| k > 0)
        .map(|(b, &k)| (*b, k))
        .collect();
    let applied: Vec<Applied> = chosen
        .iter()
        .map(|(b, k)| Applied {
            instance: b.to_instance(&arena, rules),
            count: *k,
        })
        .collect();

    if applied.is_empty() {
        return Ok(StepResult {
            config: config.clone(),
            applied,
            halted: true,
        });
    }

    if options.self_check {
        check_maximal(config, rules, &applied)?;
    }

    let next = apply(arena.clone(), rules, &chosen)?;

    if options.self_check {
        if let Err(v) = next.validate() {
            return Err(EngineError::SelfCheck(format!(
                "post-step configuration is invalid: {}",
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; ")
            )));
        }
        if next.membrane_count() != config.membrane_count() {
            return Err(EngineError::SelfCheck("membrane count changed".into()));
        }
    }

    Ok(StepResult {
        config: next,
        applied,
        halted: false,
    })
}

fn check_maximal(
    config: &Configuration,
    rules: &[Rule],
    applied: &[Applied],
) -> Result<(), EngineError> {
    let mut multiset: Vec<(RuleInstance, u64)> = applied
        .iter()
        .map(|a| (a.instance.clone(), a.count))
        .collect();
    if !is_jointly_applicable(config, rules, &multiset) {
        return Err(EngineError::SelfCheck(
            "selected instances are not jointly applicable".into(),
        ));
    }
    for extra in crate::enumerate_instances(config, rules) {
        multiset.push((extra.clone(), 1));
        let extends = is_jointly_applicable(config, rules, &multiset);
        multiset.pop();
        if extends {
            return Err(EngineError::SelfCheck(format!(
                "step is not maximal: `{}` on {} could still fire",
                extra.rule, extra.subject
            )));
        }
    }
    Ok(())
}

fn apply(
    mut arena: Arena,
    rules: &[Rule],
    chosen: &[(Binding, u64)],
) -> Result<Configuration, EngineError> {
    for (b, k) in chosen {
        let reactants = rules[b.rule]
            .consumed()
            .scaled(*k)
            .map_err(EngineError::Overflow)?;
        let src = b.source(rules);
        arena.nodes[src]
            .contents
            .sub_in_place(&reactants)
            .map_err(|e| {
                EngineError::Internal(format!("consumption of `{}`: {e}", rules[b.rule].id()))
            })?;
    }
    for (b, k) in chosen {
        let products = rules[b.rule]
            .produced()
            .scaled(*k)
            .map_err(EngineError::Overflow)?;
        let dst = b.target(rules);
        arena.nodes[dst]
            .contents
            .add_in_place(&products)
            .map_err(EngineError::Overflow)?;
    }
    // Targets come from the pre-step tree; the mover-lock keeps hosts in place.
    let moves: Vec<(usize, usize)> = chosen
        .iter()
        .filter_map(|(b, _)| match rules[b.rule].form() {
            RuleForm::Endo => b.host.map(|h| (b.subject, h)),
            RuleForm::Exo => b
                .host
                .and_then(|h| arena.nodes[h].parent)
                .map(|g| (b.subject, g)),
            _ => None,
        })
        .collect();
    for (node, new_parent) in moves {
        arena.reparent(node, new_parent);
    }
    Ok(arena.to_config())
}
