use mmsim_bone::{
    build_bone_model, density_series, micro_rules, simulate, unit_tokens, BoneError, BoneParams,
    Density, UnitParams,
};
use mmsim_core::{Configuration, Layout, Model, Multiset, Symbol};
use mmsim_engine::{oracle_successors, run, step, EngineOptions, SplitMix64, Trace};
use mmsim_parser::{lint, parse_model, serialize_model};
use proptest::prelude::*;

fn half() -> Density {
    Density::new(1, 2)
}

fn params(oc: u64, ob: u64, cycles: u64) -> BoneParams {
    BoneParams::uniform(1, half(), 20, oc, ob, cycles)
}

fn series(p: &BoneParams, seed: u64) -> Vec<Vec<(u64, Density)>> {
    simulate(p, EngineOptions::with_seed(seed), 10_000)
        .unwrap()
        .series
}

fn ms(pairs: &[(&str, u64)]) -> Multiset {
    Multiset::from_pairs(pairs.iter().copied()).unwrap()
}

#[test]
fn micro_stages_resorb_then_form() {
    let bmu = Symbol::new("BMU").unwrap();
    let layout = Layout::new(bmu.clone()).with_contents(ms(&[("_oc", 3), ("_cb", 10), ("_ob", 1)]));
    let m = Model::new(Configuration::from_layout(&layout), micro_rules(&bmu)).unwrap();

    // Both steps are forced; the oracle confirms before the engine is asked.
    let first = oracle_successors(m.config(), m.rules(), 64).unwrap();
    assert_eq!(first.len(), 1);
    let first = first.into_iter().next().unwrap();
    assert_eq!(first.contents, ms(&[("_cb", 7), ("_f", 3), ("_ob", 1)]));

    let opts = EngineOptions::default();
    let mut rng = SplitMix64::new(0);
    let s1 = step(m.config(), m.rules(), &mut rng, &opts).unwrap();
    assert_eq!(s1.config.canonical(), first);

    let second = oracle_successors(&s1.config, m.rules(), 64).unwrap();
    assert_eq!(second.len(), 1);
    let second = second.into_iter().next().unwrap();
    assert_eq!(second.contents, ms(&[("_cb", 7), ("_f", 2), ("_cn", 1)]));
    let s2 = step(&s1.config, m.rules(), &mut rng, &opts).unwrap();
    assert_eq!(s2.config.canonical(), second);
    assert!(step(&s2.config, m.rules(), &mut rng, &opts).unwrap().halted);
}

#[test]
fn one_cycle_ends_at_point_four() {
    let run = simulate(&params(3, 1, 1), EngineOptions::default(), 10_000).unwrap();
    assert!(run.trace.halted());
    assert_eq!(run.series, vec![vec![(1, Density::new(2, 5))]]);
    let t1 = Symbol::new("T1").unwrap();
    assert_eq!(run.trace.final_state()[&t1].count_of("c"), 8);
}

#[test]
fn balanced_cells_keep_density() {
    for (oc, ob) in [(0, 0), (2, 2), (5, 5), (15, 15)] {
        for cycles in 1..=4 {
            let s = series(&params(oc, ob, cycles), 0);
            assert_eq!(s[0].len() as u64, cycles);
            assert!(
                s[0].iter().all(|(_, d)| *d == half()),
                "oc=ob={oc}, cycles={cycles}: {s:?}"
            );
        }
    }
}

#[test]
fn inert_cells_give_three_unchanged_rows() {
    let s = series(&params(0, 0, 3), 0);
    assert_eq!(s[0], vec![(1, half()), (2, half()), (3, half())]);
}

#[test]
fn enough_osteoclasts_resorb_everything() {
    let s = series(&params(10, 0, 1), 0);
    assert_eq!(s[0], vec![(1, Density::new(0, 1))]);
    let s = series(&params(50, 0, 2), 0);
    assert_eq!(s[0], vec![(1, Density::new(0, 1)), (2, Density::new(0, 1))]);
}

#[test]
fn zero_cycles_never_drains() {
    let run = simulate(&params(3, 1, 0), EngineOptions::default(), 100).unwrap();
    assert!(run.trace.halted());
    assert_eq!(run.trace.steps.len(), 1);
    assert!(run.series[0].is_empty());
    let t1 = Symbol::new("T1").unwrap();
    assert_eq!(run.trace.final_state()[&t1].count_of("c"), 10);
}

#[test]
fn empty_trace_gives_empty_series() {
    let model = build_bone_model(&params(3, 1, 2)).unwrap();
    let trace = run(&model, EngineOptions::default(), 0).unwrap();
    assert_eq!(density_series(&trace, 1, 20).unwrap(), vec![]);
}

#[test]
fn truncated_cycle_is_not_sampled() {
    let model = build_bone_model(&params(3, 1, 2)).unwrap();
    // Two lead-in steps plus one cycle, minus the deposit of the first one.
    let trace = run(&model, EngineOptions::default(), 13).unwrap();
    assert!(density_series(&trace, 1, 20).unwrap().is_empty());
    let trace = run(&model, EngineOptions::default(), 14).unwrap();
    assert_eq!(density_series(&trace, 1, 20).unwrap().len(), 1);
}

#[test]
fn unknown_units_are_rejected() {
    let model = build_bone_model(&params(3, 1, 1)).unwrap();
    let trace = run(&model, EngineOptions::default(), 5).unwrap();
    assert_eq!(
        density_series(&trace, 0, 20),
        Err(BoneError::UnitOutOfRange { unit: 0 })
    );
    assert_eq!(
        density_series(&trace, 2, 20),
        Err(BoneError::UnitOutOfRange { unit: 2 })
    );
}

#[test]
fn invalid_params_are_rejected() {
    assert_eq!(
        build_bone_model(&BoneParams::uniform(1, Density::new(3, 2), 20, 0, 0, 1)),
        Err(BoneError::DensityRange("1.5".into()))
    );
    assert_eq!(
        build_bone_model(&BoneParams::uniform(0, half(), 20, 0, 0, 1)),
        Err(BoneError::NoUnits)
    );
    assert_eq!(
        build_bone_model(&BoneParams::uniform(1, half(), 0, 0, 0, 1)),
        Err(BoneError::Capacity)
    );
}

#[test]
fn built_model_is_lint_clean_and_round_trips() {
    let p = BoneParams {
        capacity: 20,
        cycles: 2,
        units: vec![
            UnitParams {
                density: half(),
                osteoclasts: 3,
                osteoblasts: 1,
            },
            UnitParams {
                density: Density::new(0, 1),
                osteoclasts: 0,
                osteoblasts: 0,
            },
        ],
    };
    let model = build_bone_model(&p).unwrap();
    assert_eq!(lint(&model), vec![]);
    assert_eq!(model.rules().len(), 2 * (19 + 2));
    let again = parse_model(&serialize_model(&model)).unwrap();
    assert!(model.structurally_eq(&again));
}

#[test]
fn bone_model_is_confluent_across_seeds() {
    let model =
        build_bone_model(&BoneParams::uniform(2, Density::new(7, 20), 20, 4, 2, 3)).unwrap();
    let reference = run(&model, EngineOptions::with_seed(0), 10_000).unwrap();
    for seed in 1..10 {
        let t = run(&model, EngineOptions::with_seed(seed), 10_000).unwrap();
        assert_eq!(t.final_state(), reference.final_state(), "seed {seed}");
        assert_eq!(t.steps.len(), reference.steps.len());
    }
}

fn unit_params() -> impl Strategy<Value = UnitParams> {
    (0u64..=20, 0u64..12, 0u64..12).prop_map(|(n, oc, ob)| UnitParams {
        density: Density::new(n, 20),
        osteoclasts: oc,
        osteoblasts: ob,
    })
}

fn check_conservation(trace: &Trace, units: usize) {
    for u in 1..=units {
        let initial = unit_tokens(&trace.initial, u);
        for s in &trace.steps {
            assert_eq!(
                unit_tokens(&s.state, u),
                initial,
                "unit {u}, step {}",
                s.step
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tokens_are_conserved(units in prop::collection::vec(unit_params(), 1..4), cycles in 0u64..5, seed in any::<u64>()) {
        let p = BoneParams { capacity: 20, cycles, units };
        let r = simulate(&p, EngineOptions::with_seed(seed), 10_000).unwrap();
        prop_assert!(r.trace.halted());
        check_conservation(&r.trace, p.units.len());
    }

    #[test]
    fn deposits_stay_within_bounds(unit in unit_params(), cycles in 1u64..6) {
        let p = BoneParams { capacity: 20, cycles, units: vec![unit.clone()] };
        let s = &series(&p, 0)[0];
        prop_assert_eq!(s.len() as u64, cycles);
        let mut prev = unit.density * 20;
        for (_, d) in s {
            let n = *d * 20;
            prop_assert!(n <= prev);
            prop_assert!(n + Density::from_integer(unit.osteoclasts) >= prev);
            prev = n;
        }
    }

    #[test]
    fn no_osteoblasts_means_non_increasing(n in 0u64..=20, oc in 0u64..30, cycles in 1u64..6) {
        let p = BoneParams::uniform(1, Density::new(n, 20), 20, oc, 0, cycles);
        let s = &series(&p, 0)[0];
        prop_assert!(s.windows(2).all(|w| w[1].1 <= w[0].1));
        prop_assert!(s[0].1 <= Density::new(n, 20));
    }

    #[test]
    fn no_osteoclasts_means_constant(n in 0u64..=20, ob in 0u64..30, cycles in 1u64..6) {
        let p = BoneParams::uniform(1, Density::new(n, 20), 20, 0, ob, cycles);
        let s = &series(&p, 0)[0];
        prop_assert!(s.iter().all(|(_, d)| *d == Density::new(n, 20)));
    }

    #[test]
    fn units_are_independent(units in prop::collection::vec(unit_params(), 2..4), cycles in 1u64..4, seed in any::<u64>()) {
        let p = BoneParams { capacity: 20, cycles, units: units.clone() };
        let together = series(&p, seed);
        for (i, u) in units.into_iter().enumerate() {
            let alone = series(&BoneParams { capacity: 20, cycles, units: vec![u] }, seed);
            prop_assert_eq!(&together[i], &alone[0]);
        }
    }
}
