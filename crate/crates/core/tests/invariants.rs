use grover_coherence::analytic::{c_alpha_ho_exact, c_alpha_two_level_exact, target_spectrum};
use grover_coherence::coherence::{c_alpha_max_pure, c_alpha_pure, AlphaParam};
use grover_coherence::dynamics::{delta_between, Operator, PoweredCoherence};
use grover_coherence::engine::{run, run_with, Detail, Stage, StageMask};
use grover_coherence::model::{optimal_iterations, subcube_pattern, two_level_state, ConfigFile};
use grover_coherence::{make_config, GroverConfig, TargetSpec};
use proptest::collection::btree_set;
use proptest::prelude::*;

fn config_strategy() -> impl Strategy<Value = GroverConfig> {
    (3u32..=9).prop_flat_map(|n| {
        btree_set(0u64..(1u64 << n), 1..=4).prop_map(move |t| {
            make_config(n, &TargetSpec::Indices(t.into_iter().collect())).expect("valid targets")
        })
    })
}

fn alpha_strategy() -> impl Strategy<Value = AlphaParam> {
    prop_oneof![0.05f64..0.999, 1.001f64..=2.0].prop_map(|a| AlphaParam::new(a).expect("in range"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simulation_matches_two_level_closed_form(config in config_strategy(), a in alpha_strategy()) {
        let t = config.target_count();
        let spectrum = target_spectrum(&config);
        let mut worst = 0.0f64;
        run_with::<f64, _>(&config, optimal_iterations(&config), StageMask::NONE, Detail::Histogram, |k, stage, s| {
            let c: f64 = c_alpha_pure(&s.histogram(), a);
            let state = two_level_state::<f64>(&config, k);
            let expected: f64 = match stage {
                Stage::PsiK | Stage::PsiKO => c_alpha_two_level_exact(config.size(), t, &state, a).value,
                Stage::PsiKHO | Stage::PsiKP => c_alpha_ho_exact(&spectrum, &state, a).value,
                Stage::PsiKHP => c_alpha_two_level_exact(config.size(), t, &state.rotated(), a).value,
            };
            worst = worst.max((c - expected).abs());
        }).unwrap();
        prop_assert!(worst <= 1e-9, "{worst}");
    }

    #[test]
    fn norm_is_preserved_and_coherence_bounded(config in config_strategy(), a in alpha_strategy()) {
        let k = 2 * optimal_iterations(&config);
        let tr = run::<f64>(&config, k, StageMask::WITH_PHASE, Detail::Histogram).unwrap();
        let cap: f64 = c_alpha_max_pure(config.size() as usize, a);
        for r in &tr.records {
            prop_assert!((r.norm_sqr - 1.0).abs() <= 1e-12);
            let c: f64 = c_alpha_pure(&r.probs, a);
            prop_assert!(c >= -1e-12 && c <= cap + 1e-9);
        }
    }

    #[test]
    fn g_deltas_telescope(config in config_strategy(), a in alpha_strategy()) {
        let tr = run::<f64>(&config, optimal_iterations(&config).max(1), StageMask::ALL, Detail::Histogram).unwrap();
        let p = PoweredCoherence::new(&tr, a);
        let g = delta_between(&p, Operator::G).unwrap();
        let sum: f64 = g.values.iter().sum();
        let direct = p.psi(g.len()).unwrap() - p.psi(0).unwrap();
        prop_assert!((sum - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn config_file_round_trips(config in config_strategy()) {
        let json = serde_json::to_string(&config.to_file()).unwrap();
        let back: ConfigFile = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.build().unwrap(), config);
    }

    #[test]
    fn subcube_witness_rebuilds_same_targets(config in config_strategy()) {
        if let Some(pattern) = subcube_pattern(config.qubits(), config.targets().indices()) {
            let rebuilt = make_config(config.qubits(), &TargetSpec::Pattern(pattern)).unwrap();
            prop_assert_eq!(rebuilt.targets().indices(), config.targets().indices());
        }
    }
}

#[test]
fn histogram_and_full_snapshots_agree() {
    let config = make_config(10, &TargetSpec::Pattern("01**1*0*10".into())).unwrap();
    let k = optimal_iterations(&config);
    let full = run::<f64>(&config, k, StageMask::ALL, Detail::Full).unwrap();
    let hist = run::<f64>(&config, k, StageMask::ALL, Detail::Histogram).unwrap();
    for a in [0.3, 1.5, 2.0] {
        let a = AlphaParam::new(a).unwrap();
        for (f, h) in full.records.iter().zip(&hist.records) {
            let (cf, ch): (f64, f64) = (c_alpha_pure(&f.probs, a), c_alpha_pure(&h.probs, a));
            assert!((cf - ch).abs() <= 1e-11, "k={} {:?}: {cf} vs {ch}", f.k, f.stage);
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let config = make_config(12, &TargetSpec::Indices(vec![7, 1000])).unwrap();
    let k = optimal_iterations(&config);
    let a = AlphaParam::new(2.0).unwrap();
    let d = run::<f64>(&config, k, StageMask::only(&[Stage::PsiK]), Detail::Histogram).unwrap();
    let s = run::<f32>(&config, k, StageMask::only(&[Stage::PsiK]), Detail::Histogram).unwrap();
    for (rd, rs) in d.records.iter().zip(&s.records) {
        assert!((rd.success_prob - rs.success_prob as f64).abs() <= 1e-3);
        let (cd, cs): (f64, f32) = (c_alpha_pure(&rd.probs, a), c_alpha_pure(&rs.probs, a));
        assert!((cd - cs as f64).abs() <= 1e-3 * cd.max(1.0));
    }
}
