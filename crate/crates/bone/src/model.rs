use mmsim_core::{Configuration, Layout, Model, Multiset, Rule, Symbol};
use mmsim_coupling::{generate_carrier_protocol, CouplingSpec, DELIVERED, REMODELLED};

use crate::density::{encode_density, Density};
use crate::error::BoneError;

/// Osteoclast token.
pub const OSTEOCLAST: &str = "_oc";
/// Osteoblast token.
pub const OSTEOBLAST: &str = "_ob";
/// Free slot left by resorption.
pub const FREE: &str = "_f";

pub const DEFAULT_CAPACITY: u64 = 20;

fn sym(s: &str) -> Symbol {
    Symbol::new(s).expect("static symbols are valid")
}

/// Per-unit initial density and cell tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitParams {
    pub density: Density,
    pub osteoclasts: u64,
    pub osteoblasts: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoneParams {
    /// Tokens standing for full mineralisation.
    pub capacity: u64,
    pub cycles: u64,
    pub units: Vec<UnitParams>,
}

impl BoneParams {
    /// `units` identical units.
    pub fn uniform(
        units: usize,
        density: Density,
        capacity: u64,
        osteoclasts: u64,
        osteoblasts: u64,
        cycles: u64,
    ) -> Self {
        BoneParams {
            capacity,
            cycles,
            units: vec![
                UnitParams {
                    density,
                    osteoclasts,
                    osteoblasts,
                };
                units
            ],
        }
    }

    pub fn validate(&self) -> Result<(), BoneError> {
        if self.units.is_empty() {
            return Err(BoneError::NoUnits);
        }
        for u in &self.units {
            encode_density(u.density, self.capacity)?;
        }
        Ok(())
    }

    /// Initial payload tokens of each unit.
    pub fn payloads(&self) -> Result<Vec<u64>, BoneError> {
        self.units
            .iter()
            .map(|u| encode_density(u.density, self.capacity))
            .collect()
    }
}

/// Coupling spec of unit `unit` (numbered from 1).
pub fn unit_spec(unit: usize, cycles: u64) -> CouplingSpec {
    CouplingSpec::for_unit(unit, cycles)
}

/// Resorption then formation inside membranes labelled `micro`.
pub fn micro_rules(micro: &Symbol) -> Vec<Rule> {
    let pair = |a: &str, b: &str| Multiset::from_pairs([(a, 1), (b, 1)]).expect("static symbols");
    let one = |a: &str| Multiset::singleton(sym(a), 1);
    vec![
        Rule::rewrite(
            format!("{micro}_resorb"),
            micro.clone(),
            pair(OSTEOCLAST, DELIVERED),
            one(FREE),
        )
        .expect("well-formed"),
        Rule::rewrite(
            format!("{micro}_form"),
            micro.clone(),
            pair(OSTEOBLAST, FREE),
            one(REMODELLED),
        )
        .expect("well-formed"),
    ]
}

fn tokens(pairs: &[(&Symbol, u64)]) -> Multiset {
    let mut m = Multiset::new();
    for (s, n) in pairs {
        if *n > 0 {
            m.insert((*s).clone(), *n).expect("distinct symbols");
        }
    }
    m
}

/// The composed two-scale model: for each unit `i`,
/// `[Ti: c*n] [CUi: [BMUi: _oc*oc, _ob*ob] [Vi: _p0, cyc*cycles]]` in one skin.
pub fn build_bone_model(params: &BoneParams) -> Result<Model, BoneError> {
    params.validate()?;
    let mut skin = Layout::new(sym("skin"));
    let mut rules = Vec::new();
    let (oc, ob) = (sym(OSTEOCLAST), sym(OSTEOBLAST));
    for (i, (unit, payload)) in params.units.iter().zip(params.payloads()?).enumerate() {
        let spec = unit_spec(i + 1, params.cycles);
        let tissue = Layout::new(spec.macro_label.clone())
            .with_contents(tokens(&[(&spec.payload, payload)]));
        let micro = Layout::new(spec.micro_label.clone())
            .with_contents(tokens(&[(&oc, unit.osteoclasts), (&ob, unit.osteoblasts)]));
        let carrier =
            Layout::new(spec.carrier_label.clone()).with_contents(spec.carrier_contents());
        skin = skin.with_child(tissue).with_child(
            Layout::new(spec.coupling_label.clone())
                .with_child(micro)
                .with_child(carrier),
        );
        rules.extend(generate_carrier_protocol(&spec)?);
        rules.extend(micro_rules(&spec.micro_label));
    }
    Ok(Model::new(Configuration::from_layout(&skin), rules)?.with_name("bone remodelling"))
}
