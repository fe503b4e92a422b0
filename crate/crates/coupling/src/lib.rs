//! Two-scale coupling compiled into ordinary membrane rules.
//!
//! A carrier membrane shuttles between a macro (tissue) membrane and a
//! micro membrane nested in a coupling membrane. Each round trip drains
//! the macro payload, hands it to the micro scale, waits two steps, picks
//! the result up and deposits it back. Phase objects `_p0`..`_p13` inside
//! the carrier sequence the journey; one cycle token is spent per trip.
//!
//! The initial layout expected by the protocol is
//!
//! ```text
//! [skin: [T: c*n] [CU: [BMU: ...] [V: _p0, cyc*k]]]
//! ```
//!
//! and the resulting model runs on the plain engine with nothing
//! coupling-specific in it.

use mmsim_core::{CoreError, Multiset, Rule, Symbol};
use thiserror::Error;

/// Payload loaded into the carrier during drain.
pub const LOADED: &str = "_cl";
/// Payload handed to the micro membrane.
pub const DELIVERED: &str = "_cb";
/// Payload newly produced by the micro scale.
pub const REMODELLED: &str = "_cn";
/// Payload on its way back to the macro membrane.
pub const RETURNING: &str = "_cr";

/// Number of phase symbols.
pub const PHASES: usize = 14;

/// Steps from one drain to the next once the carrier is cycling.
pub const CYCLE_LENGTH: u64 = 12;
/// Steps from the initial phase to the first drain.
pub const LEAD_IN: u64 = 2;

/// Phase symbol `_p{i}`.
pub fn phase(i: usize) -> Symbol {
    assert!(i < PHASES, "phase index {i} out of range");
    Symbol::new(format!("_p{i}")).expect("phase symbols are valid")
}

/// The phase held by a carrier, if it holds exactly one phase object.
pub fn phase_of(contents: &Multiset) -> Option<usize> {
    let mut found = None;
    for i in 0..PHASES {
        match contents.count(&phase(i)) {
            0 => {}
            1 if found.is_none() => found = Some(i),
            _ => return None,
        }
    }
    found
}

/// Engine steps in one steady-state macro-cycle.
pub fn carrier_cycle_length() -> u64 {
    CYCLE_LENGTH
}

/// Steps that fire at least one rule before a carrier with `cycles` tokens
/// stops. If the last trip brings nothing back, its deposit step has
/// nothing to do and the run is one step shorter.
pub fn run_length(cycles: u64, last_return_empty: bool) -> u64 {
    if cycles == 0 {
        0
    } else {
        LEAD_IN + CYCLE_LENGTH * cycles - u64::from(last_return_empty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CouplingError {
    #[error("`{0}` uses the reserved `_` prefix")]
    Reserved(Symbol),
    #[error("`{0}` is used for more than one role")]
    Duplicate(Symbol),
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingSpec {
    pub macro_label: Symbol,
    pub micro_label: Symbol,
    pub coupling_label: Symbol,
    pub carrier_label: Symbol,
    pub payload: Symbol,
    pub cycle_symbol: Symbol,
    pub cycles: u64,
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s).expect("static symbols are valid")
}

impl CouplingSpec {
    /// Labels `T`, `BMU`, `CU`, `V`; payload `c`; cycle token `cyc`.
    pub fn new(cycles: u64) -> Self {
        CouplingSpec {
            macro_label: sym("T"),
            micro_label: sym("BMU"),
            coupling_label: sym("CU"),
            carrier_label: sym("V"),
            payload: sym("c"),
            cycle_symbol: sym("cyc"),
            cycles,
        }
    }

    /// The default spec with labels suffixed by `unit` (`T1`, `BMU1`, ...).
    pub fn for_unit(unit: usize, cycles: u64) -> Self {
        let l = |s: &str| sym(&format!("{s}{unit}"));
        CouplingSpec {
            macro_label: l("T"),
            micro_label: l("BMU"),
            coupling_label: l("CU"),
            carrier_label: l("V"),
            ..CouplingSpec::new(cycles)
        }
    }

    pub fn validate(&self) -> Result<(), CouplingError> {
        let user = [
            &self.macro_label,
            &self.micro_label,
            &self.coupling_label,
            &self.carrier_label,
            &self.payload,
            &self.cycle_symbol,
        ];
        for (i, s) in user.iter().enumerate() {
            if s.is_reserved() {
                return Err(CouplingError::Reserved((*s).clone()));
            }
            if user[..i].contains(s) {
                return Err(CouplingError::Duplicate((*s).clone()));
            }
        }
        Ok(())
    }

    /// Initial carrier contents: phase zero plus one token per cycle.
    pub fn carrier_contents(&self) -> Multiset {
        let mut m = Multiset::singleton(phase(0), 1);
        if self.cycles > 0 {
            m.insert(self.cycle_symbol.clone(), self.cycles)
                .expect("fresh symbol");
        }
        m
    }

    /// The payload symbol followed by the four cargo symbols.
    pub fn transit_symbols(&self) -> [Symbol; 5] {
        [
            self.payload.clone(),
            sym(LOADED),
            sym(DELIVERED),
            sym(REMODELLED),
            sym(RETURNING),
        ]
    }
}

fn one(s: &Symbol) -> Multiset {
    Multiset::singleton(s.clone(), 1)
}

fn p(i: usize) -> Multiset {
    one(&phase(i))
}

/// The carrier protocol for `spec`: 19 rules, ids prefixed by the carrier
/// label.
pub fn generate_carrier_protocol(spec: &CouplingSpec) -> Result<Vec<Rule>, CouplingError> {
    spec.validate()?;
    let v = &spec.carrier_label;
    let t = &spec.macro_label;
    let cu = &spec.coupling_label;
    let bmu = &spec.micro_label;
    let id = |name: &str| format!("{v}_{name}");
    let (cl, cb, cn, cr) = (sym(LOADED), sym(DELIVERED), sym(REMODELLED), sym(RETURNING));
    let with_cyc = |i: usize| {
        p(i).checked_add(&one(&spec.cycle_symbol))
            .expect("small counts")
    };

    let rules = vec![
        Rule::exo(id("depart"), v.clone(), cu.clone(), with_cyc(0), p(1))?,
        Rule::endo(id("enter_tissue"), v.clone(), t.clone(), p(1), p(2))?,
        Rule::send_in(id("drain"), v.clone(), one(&spec.payload), one(&cl))?.with_promoter(p(2)),
        Rule::rewrite(id("loaded"), v.clone(), p(2), p(3))?,
        Rule::exo(id("leave_tissue"), v.clone(), t.clone(), p(3), p(4))?,
        Rule::endo(id("enter_coupling"), v.clone(), cu.clone(), p(4), p(5))?,
        Rule::endo(id("enter_micro"), v.clone(), bmu.clone(), p(5), p(6))?,
        Rule::send_out(id("deliver"), v.clone(), one(&cl), one(&cb))?.with_promoter(p(6)),
        Rule::rewrite(id("delivered"), v.clone(), p(6), p(7))?,
        Rule::rewrite(id("wait_resorb"), v.clone(), p(7), p(8))?,
        Rule::rewrite(id("wait_form"), v.clone(), p(8), p(9))?,
        Rule::send_in(id("pickup_old"), v.clone(), one(&cb), one(&cr))?.with_promoter(p(9)),
        Rule::send_in(id("pickup_new"), v.clone(), one(&cn), one(&cr))?.with_promoter(p(9)),
        Rule::rewrite(id("picked_up"), v.clone(), p(9), p(10))?,
        Rule::exo(id("leave_micro"), v.clone(), bmu.clone(), p(10), p(11))?,
        Rule::exo(id("leave_coupling"), v.clone(), cu.clone(), p(11), p(12))?,
        Rule::endo(id("return_tissue"), v.clone(), t.clone(), p(12), p(13))?,
        Rule::send_out(id("deposit"), v.clone(), one(&cr), one(&spec.payload))?
            .with_promoter(p(13)),
        Rule::rewrite(id("restart"), v.clone(), with_cyc(13), p(2))?,
    ];
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nineteen_rules_over_four_labels() {
        let spec = CouplingSpec::new(1);
        let rules = generate_carrier_protocol(&spec).unwrap();
        assert_eq!(rules.len(), 19);
        let labels = [
            &spec.macro_label,
            &spec.micro_label,
            &spec.coupling_label,
            &spec.carrier_label,
        ];
        for r in &rules {
            assert_eq!(r.subject(), &spec.carrier_label);
            if let Some(h) = r.host() {
                assert!(labels.contains(&h));
            }
        }
    }

    #[test]
    fn reserved_user_symbols_are_rejected() {
        let spec = CouplingSpec {
            payload: sym("_cl"),
            ..CouplingSpec::new(1)
        };
        assert_eq!(
            generate_carrier_protocol(&spec),
            Err(CouplingError::Reserved(sym("_cl")))
        );
    }

    #[test]
    fn roles_must_be_distinct() {
        let spec = CouplingSpec {
            micro_label: sym("T"),
            ..CouplingSpec::new(1)
        };
        assert_eq!(spec.validate(), Err(CouplingError::Duplicate(sym("T"))));
    }

    #[test]
    fn phase_of_needs_exactly_one() {
        assert_eq!(phase_of(&p(4)), Some(4));
        assert_eq!(phase_of(&Multiset::new()), None);
        assert_eq!(phase_of(&p(4).checked_add(&p(5)).unwrap()), None);
        assert_eq!(phase_of(&p(4).scaled(2).unwrap()), None);
    }

    #[test]
    fn carrier_contents_hold_cycle_tokens() {
        let c = CouplingSpec::new(3).carrier_contents();
        assert_eq!(c.count_of("cyc"), 3);
        assert_eq!(phase_of(&c), Some(0));
        assert_eq!(CouplingSpec::new(0).carrier_contents().total(), 1);
    }
}
