use mmsim_core::{Model, Symbol};
use mmsim_coupling::{phase_of, CouplingSpec, PHASES};
use mmsim_engine::{run, EngineOptions, LabelState, Trace};

use crate::density::{decode_density, Density};
use crate::error::BoneError;
use crate::model::{build_bone_model, unit_spec, BoneParams, FREE};

fn states(trace: &Trace) -> Vec<&LabelState> {
    std::iter::once(&trace.initial)
        .chain(trace.steps.iter().map(|s| &s.state))
        .collect()
}

fn checked_spec(trace: &Trace, unit: usize) -> Result<CouplingSpec, BoneError> {
    let spec = unit_spec(unit, 0);
    if unit == 0
        || !trace.initial.contains_key(&spec.macro_label)
        || !trace.initial.contains_key(&spec.carrier_label)
    {
        return Err(BoneError::UnitOutOfRange { unit });
    }
    Ok(spec)
}

/// Tissue density of `unit` after each completed deposit, numbered from 1.
///
/// A cycle is complete once the step after the carrier's return into the
/// tissue has been recorded; a truncated final cycle yields no sample.
pub fn density_series(
    trace: &Trace,
    unit: usize,
    capacity: u64,
) -> Result<Vec<(u64, Density)>, BoneError> {
    let spec = checked_spec(trace, unit)?;
    let all = states(trace);
    let last_phase = PHASES - 1;
    let phase = |s: &LabelState| s.get(&spec.carrier_label).and_then(phase_of);
    let mut out = Vec::new();
    for j in 1..all.len() {
        let returned = phase(all[j]) == Some(last_phase) && phase(all[j - 1]) != Some(last_phase);
        if !returned {
            continue;
        }
        let Some(after) = all.get(j + 1) else { break };
        let n = after[&spec.macro_label].count(&spec.payload);
        out.push((out.len() as u64 + 1, decode_density(n, capacity)?));
    }
    Ok(out)
}

/// Payload in every form plus free slots, summed over the unit's membranes.
pub fn unit_tokens(state: &LabelState, unit: usize) -> u64 {
    let spec = unit_spec(unit, 0);
    let mut counted = spec.transit_symbols().to_vec();
    counted.push(Symbol::new(FREE).expect("static symbol"));
    [
        &spec.macro_label,
        &spec.micro_label,
        &spec.coupling_label,
        &spec.carrier_label,
    ]
    .iter()
    .filter_map(|l| state.get(*l))
    .map(|m| counted.iter().map(|s| m.count(s)).sum::<u64>())
    .sum()
}

/// A bone run: the model, its trace and one density series per unit.
pub struct BoneRun {
    pub model: Model,
    pub trace: Trace,
    pub series: Vec<Vec<(u64, Density)>>,
}

pub fn simulate(
    params: &BoneParams,
    options: EngineOptions,
    max_steps: u64,
) -> Result<BoneRun, BoneError> {
    let model = build_bone_model(params)?;
    let trace = run(&model, options, max_steps)?;
    let series = (1..=params.units.len())
        .map(|u| density_series(&trace, u, params.capacity))
        .collect::<Result<_, _>>()?;
    Ok(BoneRun {
        model,
        trace,
        series,
    })
}
