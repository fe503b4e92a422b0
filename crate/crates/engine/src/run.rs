use std::collections::BTreeMap;

use mmsim_core::{Configuration, Model, Multiset, Rule, Symbol};
use serde::Serialize;

use crate::error::EngineError;
use crate::rng::{SplitMix64, RNG_NAME};
use crate::step::{step, Applied, EngineOptions, StepResult};

/// Object counts summed per membrane label.
pub type LabelState = BTreeMap<Symbol, Multiset>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: u64,
    pub applied: Vec<Applied>,
    pub halted: bool,
    /// Post-step state.
    pub state: LabelState,
}

/// Replayable record of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub seed: u64,
    pub rng: String,
    pub initial: LabelState,
    pub steps: Vec<StepRecord>,
}

impl Trace {
    pub fn halted(&self) -> bool {
        self.steps.last().is_some_and(|s| s.halted)
    }

    /// State after the last recorded step (the initial state if none).
    pub fn final_state(&self) -> &LabelState {
        self.steps.last().map_or(&self.initial, |s| &s.state)
    }

    /// State before step `i`.
    pub fn state_before(&self, i: usize) -> &LabelState {
        if i == 0 {
            &self.initial
        } else {
            &self.steps[i - 1].state
        }
    }
}

fn label_state(config: &Configuration) -> Result<LabelState, EngineError> {
    config.label_totals().map_err(EngineError::Overflow)
}

/// A model being stepped, with its generator state.
pub struct Simulation<'m> {
    rules: &'m [Rule],
    config: Configuration,
    rng: SplitMix64,
    options: EngineOptions,
    steps: u64,
    halted: bool,
}

impl<'m> Simulation<'m> {
    pub fn new(model: &'m Model, options: EngineOptions) -> Result<Self, EngineError> {
        model
            .config()
            .validate()
            .map_err(EngineError::InvalidConfiguration)?;
        Ok(Simulation {
            rules: model.rules(),
            config: model.config().clone(),
            rng: SplitMix64::new(options.seed),
            options,
            steps: 0,
            halted: false,
        })
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    pub fn step(&mut self) -> Result<StepResult, EngineError> {
        let result = step(&self.config, self.rules, &mut self.rng, &self.options)?;
        self.config = result.config.clone();
        self.halted = result.halted;
        self.steps += 1;
        Ok(result)
    }

    /// Steps until a halting configuration or `max_steps`, recording every
    /// step including the halting one.
    pub fn run(&mut self, max_steps: u64) -> Result<Trace, EngineError> {
        let mut trace = Trace {
            seed: self.options.seed,
            rng: RNG_NAME.to_string(),
            initial: label_state(&self.config)?,
            steps: Vec::new(),
        };
        for _ in 0..max_steps {
            let index = self.steps;
            let r = self.step()?;
            trace.steps.push(StepRecord {
                step: index,
                applied: r.applied,
                halted: r.halted,
                state: label_state(&self.config)?,
            });
            if r.halted {
                break;
            }
        }
        Ok(trace)
    }
}

pub fn run(model: &Model, options: EngineOptions, max_steps: u64) -> Result<Trace, EngineError> {
    Simulation::new(model, options)?.run(max_steps)
}
