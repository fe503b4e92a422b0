use mmsim_core::{Configuration, Layout, Model, Multiset, Rule, Symbol};
use mmsim_coupling::{
    carrier_cycle_length, generate_carrier_protocol, phase_of, run_length, CouplingSpec, LEAD_IN,
};
use mmsim_engine::{run, EngineOptions, LabelState, Trace};
use mmsim_parser::{parse_model, serialize_model};

fn sym(s: &str) -> Symbol {
    Symbol::new(s).unwrap()
}

/// A token-preserving stand-in for a micro model.
fn micro(label: &Symbol) -> Vec<Rule> {
    let src = format!(
        "[s] rule {label}_r: in {label}: _oc, _cb -> _f rule {label}_f: in {label}: _ob, _f -> _cn"
    );
    parse_model(&src).unwrap().rules().to_vec()
}

fn unit_layout(spec: &CouplingSpec, payload: u64, oc: u64, ob: u64) -> [Layout; 2] {
    let mut bmu = Multiset::new();
    for (s, n) in [("_oc", oc), ("_ob", ob)] {
        if n > 0 {
            bmu.insert(sym(s), n).unwrap();
        }
    }
    let tissue = Layout::new(spec.macro_label.clone()).with_contents(if payload > 0 {
        Multiset::singleton(spec.payload.clone(), payload)
    } else {
        Multiset::new()
    });
    let coupling = Layout::new(spec.coupling_label.clone())
        .with_child(Layout::new(spec.micro_label.clone()).with_contents(bmu))
        .with_child(Layout::new(spec.carrier_label.clone()).with_contents(spec.carrier_contents()));
    [tissue, coupling]
}

fn composed(units: &[(CouplingSpec, u64, u64, u64)]) -> Model {
    let mut skin = Layout::new(sym("skin"));
    let mut rules = Vec::new();
    for (spec, payload, oc, ob) in units {
        for l in unit_layout(spec, *payload, *oc, *ob) {
            skin = skin.with_child(l);
        }
        rules.extend(generate_carrier_protocol(spec).unwrap());
        rules.extend(micro(&spec.micro_label));
    }
    Model::new(Configuration::from_layout(&skin), rules).unwrap()
}

fn states(t: &Trace) -> Vec<&LabelState> {
    std::iter::once(&t.initial)
        .chain(t.steps.iter().map(|s| &s.state))
        .collect()
}

fn phases(t: &Trace, carrier: &Symbol) -> Vec<usize> {
    states(t)
        .iter()
        .map(|s| phase_of(&s[carrier]).expect("exactly one phase symbol"))
        .collect()
}

fn unit_tokens(state: &LabelState, spec: &CouplingSpec) -> u64 {
    let labels = [
        &spec.macro_label,
        &spec.micro_label,
        &spec.coupling_label,
        &spec.carrier_label,
    ];
    let mut counted = spec.transit_symbols().to_vec();
    counted.push(sym("_f"));
    labels
        .iter()
        .map(|l| counted.iter().map(|s| state[*l].count(s)).sum::<u64>())
        .sum()
}

#[test]
fn run_length_matches_engine() {
    for k in 0..5 {
        let spec = CouplingSpec::new(k);
        let t = run(
            &composed(&[(spec, 10, 3, 1)]),
            EngineOptions::default(),
            1_000,
        )
        .unwrap();
        assert!(t.halted());
        assert_eq!(
            t.steps.len() as u64,
            run_length(k, false) + 1,
            "cycles = {k}"
        );
    }
    // Everything resorbed, nothing formed: the last deposit is empty.
    for (payload, oc) in [(10, 10), (0, 0)] {
        let t = run(
            &composed(&[(CouplingSpec::new(2), payload, oc, 0)]),
            EngineOptions::default(),
            1_000,
        )
        .unwrap();
        assert_eq!(t.steps.len() as u64, run_length(2, true) + 1);
    }
}

#[test]
fn steady_state_cycle_is_twelve_steps() {
    assert_eq!(carrier_cycle_length(), 12);
    let spec = CouplingSpec::new(4);
    let t = run(
        &composed(&[(spec.clone(), 10, 3, 1)]),
        EngineOptions::default(),
        1_000,
    )
    .unwrap();
    let ph = phases(&t, &spec.carrier_label);
    // Indices of states in which the carrier has just entered phase 2.
    let entries: Vec<usize> = (1..ph.len())
        .filter(|&i| ph[i] == 2 && ph[i - 1] != 2)
        .collect();
    assert_eq!(entries.len(), 4);
    assert_eq!(entries[0] as u64, LEAD_IN);
    for w in entries.windows(2) {
        assert_eq!((w[1] - w[0]) as u64, carrier_cycle_length());
    }
    // The first cycle, from the initial phase to the second drain.
    assert_eq!(entries[1] as u64, carrier_cycle_length() + 2);
}

#[test]
fn carrier_holds_exactly_one_phase() {
    for k in [1, 3] {
        let spec = CouplingSpec::new(k);
        let t = run(
            &composed(&[(spec.clone(), 7, 2, 5)]),
            EngineOptions::with_seed(k),
            1_000,
        )
        .unwrap();
        let ph = phases(&t, &spec.carrier_label);
        assert_eq!(ph.first(), Some(&0));
        assert_eq!(ph.last(), Some(&13));
    }
}

#[test]
fn tokens_are_conserved_in_transit() {
    for (payload, oc, ob) in [(10, 3, 1), (20, 0, 4), (5, 9, 9), (0, 1, 1)] {
        let spec = CouplingSpec::new(3);
        let t = run(
            &composed(&[(spec.clone(), payload, oc, ob)]),
            EngineOptions::default(),
            1_000,
        )
        .unwrap();
        for s in states(&t) {
            assert_eq!(unit_tokens(s, &spec), payload);
        }
    }
}

#[test]
fn drain_empties_the_tissue() {
    let spec = CouplingSpec::new(3);
    let t = run(
        &composed(&[(spec.clone(), 12, 4, 2)]),
        EngineOptions::default(),
        1_000,
    )
    .unwrap();
    let ph = phases(&t, &spec.carrier_label);
    let mut drains = 0;
    for (i, s) in t.steps.iter().enumerate() {
        if ph[i] == 2 {
            assert_eq!(
                s.state[&spec.macro_label].count(&spec.payload),
                0,
                "step {i}"
            );
            drains += 1;
        }
    }
    assert_eq!(drains, 3);
}

#[test]
fn zero_cycles_halts_without_draining() {
    let spec = CouplingSpec::new(0);
    let m = composed(&[(spec.clone(), 10, 3, 1)]);
    let t = run(&m, EngineOptions::default(), 100).unwrap();
    assert_eq!(t.steps.len(), 1);
    assert!(t.steps[0].halted);
    assert_eq!(t.final_state()[&spec.macro_label].count(&spec.payload), 10);
}

#[test]
fn one_cycle_returns_remodelled_payload() {
    let spec = CouplingSpec::new(1);
    let t = run(
        &composed(&[(spec.clone(), 10, 3, 1)]),
        EngineOptions::default(),
        100,
    )
    .unwrap();
    // 10 loaded, 3 resorbed, 1 re-formed: 8 come back.
    assert_eq!(t.final_state()[&spec.macro_label].count(&spec.payload), 8);
}

/// The part of a state that belongs to one unit.
fn project(state: &LabelState, spec: &CouplingSpec) -> Vec<Multiset> {
    [
        &spec.macro_label,
        &spec.micro_label,
        &spec.coupling_label,
        &spec.carrier_label,
    ]
    .iter()
    .map(|l| state[*l].clone())
    .collect()
}

#[test]
fn units_proceed_independently() {
    let one = CouplingSpec::for_unit(1, 2);
    let two = CouplingSpec::for_unit(2, 3);
    let both = run(
        &composed(&[(one.clone(), 10, 3, 1), (two.clone(), 6, 1, 4)]),
        EngineOptions::with_seed(5),
        1_000,
    )
    .unwrap();
    for (spec, payload, oc, ob) in [(one, 10, 3, 1), (two, 6, 1, 4)] {
        let alone = run(
            &composed(&[(spec.clone(), payload, oc, ob)]),
            EngineOptions::with_seed(9),
            1_000,
        )
        .unwrap();
        let a = states(&alone);
        let b = states(&both);
        // The solo run halts earlier or at the same time; afterwards the unit is frozen.
        for (i, s) in b.iter().enumerate() {
            let solo = a[i.min(a.len() - 1)];
            assert_eq!(
                project(s, &spec),
                project(solo, &spec),
                "{} at {i}",
                spec.carrier_label
            );
        }
    }
}

#[test]
fn composed_model_round_trips_through_text() {
    let m = composed(&[(CouplingSpec::for_unit(1, 2), 10, 3, 1)]);
    let again = parse_model(&serialize_model(&m)).unwrap();
    assert!(m.structurally_eq(&again));
}
