mod common;

use adaptive_ccb::bench::{gen_lower_bound_instance, gen_paper_instance, gen_random_instance};
use adaptive_ccb::env::{sample_round, CausalInstance, ContextSpec, Simulator, StructuredMap};
use adaptive_ccb::{transition_threshold, Error, Intervention, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn first_one_instance(q0: Vec<f64>, k: usize) -> CausalInstance {
    let n = q0.len();
    let point = |i: usize| {
        let mut v = vec![0.0; k];
        v[i] = 1.0;
        v
    };
    CausalInstance {
        k,
        n,
        q0,
        transition_map: StructuredMap::FirstOne {
            per_variable: (0..n).map(|j| point(j.min(k - 1))).collect(),
            default: point(k - 1),
        },
        contexts: (0..k)
            .map(|_| ContextSpec {
                q: vec![0.5; n],
                reward_map: StructuredMap::Lookup {
                    subset: vec![],
                    table: vec![0.5],
                },
            })
            .collect(),
    }
}

#[test]
fn first_one_rows_match_enumeration() {
    let inst = first_one_instance(vec![0.5, 0.5], 3);
    let p = inst.true_transition_matrix();
    let brute = common::enumerate_transitions(&inst);
    assert_eq!(brute[0], vec![0.5, 0.25, 0.25]);
    assert_eq!(brute[Intervention::set(1, true).index()], vec![0.5, 0.5, 0.0]);
    for (a, row) in brute.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            assert!((p.get(a, i) - v).abs() < 1e-15);
        }
    }
    assert!(inst.validate().passed());
}

#[test]
fn desk_instance_transitions_and_rewards() {
    let inst = gen_paper_instance(25, 25, 0.3, 2, 0).unwrap();
    let p = inst.true_transition_matrix();
    for i in 0..25 {
        assert!((p.get(0, i) - 1.0 / 25.0).abs() < 1e-15);
    }
    let r = inst.true_reward_matrix();
    assert!((r.get(Intervention::set(0, true).index(), 0) - 0.8).abs() < 1e-15);
    assert!((r.get(0, 0) - 0.5).abs() < 1e-15);

    for k in [2usize, 5, 10, 25] {
        let inst = gen_paper_instance(k, k, 0.3, 2, 0).unwrap();
        let p = inst.true_transition_matrix();
        let kf = k as f64;
        let boosted = 1.0 / kf + (kf - 1.0) / (2.0 * kf * kf);
        for j in 0..k {
            assert!((p.get(Intervention::set(j, true).index(), j) - boosted).abs() < 1e-14);
        }
    }
}

#[test]
fn desk_instance_with_unequal_sizes_keeps_uniform_do_row() {
    for (n, k) in [(3usize, 7usize), (12, 5), (20, 10)] {
        let inst = gen_paper_instance(n, k, 0.2, 2, 0).unwrap();
        let row = inst.true_transition_matrix().row(0).to_vec();
        assert!(row.iter().all(|v| (v - 1.0 / k as f64).abs() < 1e-14), "{n} {k}");
    }
}

#[test]
fn lower_bound_rows_are_point_masses() {
    let inst = gen_lower_bound_instance(4, (0, Intervention::set(0, true)), 0.1, &[2, 3, 2, 2]).unwrap();
    let p = inst.true_transition_matrix();
    assert_eq!(p.row(0), &[0.0, 0.0, 0.0, 1.0]);
    for j in 0..3 {
        let mut e = vec![0.0; 4];
        e[j] = 1.0;
        assert_eq!(p.row(Intervention::set(j, true).index()), e.as_slice());
    }
}

/// The exact transition design of the experiments with `k = 25`: `do()` is
/// uniform, `do(X_j = 1)` doubles context `j` and shrinks the others.
#[test]
fn transition_threshold_of_the_experimental_design() {
    let k = 25usize;
    let kf = k as f64;
    let mut rows = vec![vec![1.0 / kf; k]];
    for j in 0..k {
        rows.push(vec![1.0 / kf; k]);
        let mut r = vec![1.0 / kf - 1.0 / (kf * (kf - 1.0)); k];
        r[j] = 2.0 / kf;
        rows.push(r);
    }
    let p = Matrix::from_rows(rows).unwrap();
    assert!((transition_threshold(&p).unwrap() - (1.0 / 25.0 - 1.0 / 600.0)).abs() < 1e-15);
    let id = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert_eq!(transition_threshold(&id).unwrap(), 1.0);
    assert!(matches!(
        transition_threshold(&Matrix::zeros(3, 2)),
        Err(Error::DegenerateTransitions)
    ));
}

#[test]
fn deterministic_transitions_under_zero_probabilities() {
    let inst = first_one_instance(vec![0.0; 4], 5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let o = sample_round(&inst, &mut rng, Intervention::set(2, true), |_| Intervention::DoNothing).unwrap();
        assert_eq!(o.context, 2);
        assert!(o.start_realization[2]);
    }
}

#[test]
fn callback_out_of_range_is_an_error() {
    let inst = first_one_instance(vec![0.5; 2], 2);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let r = sample_round(&inst, &mut rng, Intervention::DoNothing, |_| Intervention::set(7, true));
    assert!(matches!(r, Err(Error::InterventionOutOfRange { .. })));
}

#[test]
fn empirical_do_row_matches_closed_form() {
    let inst = gen_paper_instance(10, 10, 0.3, 2, 0).unwrap();
    let row = inst.true_transition_matrix().row(0).to_vec();
    let mut sim = Simulator::new(&inst, ChaCha8Rng::seed_from_u64(11));
    let mut counts = vec![0u64; 10];
    for _ in 0..100_000 {
        counts[sim.pull(Intervention::DoNothing, |_| Intervention::DoNothing).unwrap().context] += 1;
    }
    assert!(common::tv(&common::normalize(&counts), &row) <= 0.02);
}

#[test]
fn instance_file_round_trip() {
    let inst = gen_random_instance(3, 4, 9).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    inst.save(&path).unwrap();
    assert_eq!(CausalInstance::load(&path).unwrap(), inst);

    let mut json: serde_json::Value = serde_json::from_str(&inst.to_json().unwrap()).unwrap();
    json["extra"] = serde_json::json!(1);
    assert!(CausalInstance::from_json(&json.to_string()).is_err());
}

fn random_instance() -> impl Strategy<Value = CausalInstance> {
    (1usize..=4, 1usize..=4, any::<u64>()).prop_map(|(n, k, s)| gen_random_instance(n, k, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_match_enumeration(inst in random_instance()) {
        let p = inst.true_transition_matrix();
        let brute = common::enumerate_transitions(&inst);
        for (a, row) in brute.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                prop_assert!((p.get(a, i) - v).abs() < 1e-12);
            }
        }
        let r = inst.true_reward_matrix();
        let brute = common::enumerate_rewards(&inst);
        for (a, row) in brute.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                prop_assert!((r.get(a, i) - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conditioning_equals_intervening(inst in random_instance()) {
        let report = inst.validate();
        prop_assert!(report.passed(), "{}", report);
        prop_assert!(report.max_identity_violation <= 1e-12);
        prop_assert!(report.max_marginal_violation <= 1e-12);
        let p = inst.true_transition_matrix();
        for j in 0..inst.n {
            for x in [false, true] {
                let brute = common::enumerate_conditional(&inst.transition_map, &inst.q0, j, x).unwrap();
                let row = p.row(Intervention::set(j, x).index());
                for (b, v) in brute.iter().zip(row) {
                    prop_assert!((b - v).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn marginal_consistency(inst in random_instance()) {
        let p = inst.true_transition_matrix();
        for j in 0..inst.n {
            let q = inst.q0[j];
            for i in 0..inst.k {
                let mix = q * p.get(Intervention::set(j, true).index(), i)
                    + (1.0 - q) * p.get(Intervention::set(j, false).index(), i);
                prop_assert!((p.get(0, i) - mix).abs() < 1e-12);
            }
        }
        for row in p.iter_rows() {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_seeds_give_identical_rounds(inst in random_instance(), seed in any::<u64>(), a in 0usize..3) {
        let a0 = Intervention::from_index(a.min(2 * inst.n), inst.n).unwrap();
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20)
                .map(|t| sample_round(&inst, &mut rng, a0, |_| Intervention::from_index(t % 3, inst.n).unwrap_or(Intervention::DoNothing)).unwrap())
                .collect::<Vec<_>>()
        };
        let first = run();
        prop_assert_eq!(&first, &run());
        for o in &first {
            if let Intervention::Set { var, value } = o.start_intervention {
                prop_assert_eq!(o.start_realization[var], value);
            }
            if let Intervention::Set { var, value } = o.context_intervention {
                prop_assert_eq!(o.context_realization[var], value);
            }
        }
    }
}
