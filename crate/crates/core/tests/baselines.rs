use adaptive_ccb::baselines::{baseline_explore, baseline_explore_detailed, unif_explore, Algo, BaselineKind};
use adaptive_ccb::bench::{gen_paper_instance, gen_random_instance, RegretEvaluator, BEST_TOLERANCE};
use adaptive_ccb::env::{CausalInstance, ContextSpec, Simulator, StructuredMap};
use adaptive_ccb::{Error, Intervention};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sim(inst: &CausalInstance, seed: u64) -> Simulator<'_, ChaCha8Rng> {
    Simulator::new(inst, ChaCha8Rng::seed_from_u64(seed))
}

/// One variable, one context; `do(X1=1)` pays 0.9, `do(X1=0)` pays 0.1.
fn two_armed() -> CausalInstance {
    CausalInstance {
        k: 1,
        n: 1,
        q0: vec![0.5],
        transition_map: StructuredMap::Lookup {
            subset: vec![],
            table: vec![vec![1.0]],
        },
        contexts: vec![ContextSpec {
            q: vec![0.5],
            reward_map: StructuredMap::Lookup {
                subset: vec![0],
                table: vec![0.1, 0.9],
            },
        }],
    }
}

fn flat_rewards(mut inst: CausalInstance) -> CausalInstance {
    for c in &mut inst.contexts {
        c.reward_map = StructuredMap::Lookup {
            subset: vec![],
            table: vec![0.5],
        };
    }
    inst
}

#[test]
fn round_robin_start_is_balanced() {
    let inst = gen_paper_instance(4, 3, 0.3, 2, 0).unwrap();
    let big_n = inst.num_interventions() as u64;
    for kind in [BaselineKind::UnifExplore, BaselineKind::RoundRobinStartUCB, BaselineKind::RoundRobinStartTS] {
        let (_, state) = baseline_explore_detailed(kind, &mut sim(&inst, 1), big_n * 7).unwrap();
        assert!(state.pulls.start.iter().all(|&c| c == 7), "{kind:?}");
    }
}

#[test]
fn flat_rewards_give_zero_regret() {
    let inst = flat_rewards(gen_random_instance(3, 3, 8).unwrap());
    let ev = RegretEvaluator::new(&inst).unwrap();
    for algo in Algo::ALL {
        for seed in 0..5 {
            let pi = algo.explore(&mut sim(&inst, seed), 500).unwrap();
            assert!(ev.regret(&pi).unwrap() <= BEST_TOLERANCE, "{algo}");
        }
    }
}

#[test]
fn unif_explore_is_the_round_robin_baseline() {
    let inst = gen_random_instance(2, 4, 3).unwrap();
    let a = unif_explore(&mut sim(&inst, 9), 777).unwrap();
    let b = baseline_explore(BaselineKind::UnifExplore, &mut sim(&inst, 9), 777).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bandit_rules_find_the_better_arm() {
    let inst = two_armed();
    let best = Intervention::set(0, true);
    for kind in [BaselineKind::TSBoth, BaselineKind::UCBBoth] {
        let hits = (0..500)
            .filter(|&t| baseline_explore(kind, &mut sim(&inst, t), 2_000).unwrap().per_context[0] == best)
            .count();
        assert!(hits >= 495, "{kind:?}: {hits}/500");
    }
}

#[test]
fn empty_budget_is_an_error() {
    let inst = two_armed();
    for kind in BaselineKind::ALL {
        assert!(matches!(
            baseline_explore(kind, &mut sim(&inst, 0), 0),
            Err(Error::Budget { min: 1, .. })
        ));
    }
}

#[test]
fn empirical_matrices_come_from_explicit_pulls() {
    let inst = gen_random_instance(2, 3, 4).unwrap();
    let (_, state) = baseline_explore_detailed(BaselineKind::UCBBoth, &mut sim(&inst, 2), 3_000).unwrap();
    for (a, &pulled) in state.pulls.start.iter().enumerate() {
        let sum: f64 = state.p_hat.row(a).iter().sum();
        if pulled > 0 {
            assert!((sum - 1.0).abs() < 1e-12);
        } else {
            assert_eq!(sum, 0.0);
        }
    }
    for a in 0..inst.num_interventions() {
        for i in 0..3 {
            if state.pulls.context[a * 3 + i] == 0 {
                assert_eq!(state.r_hat.get(a, i), 0.0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_budget_yields_a_valid_policy(
        n in 1usize..=3,
        k in 1usize..=3,
        s in any::<u64>(),
        budget in 1u64..300,
        which in 0usize..5,
    ) {
        let inst = gen_random_instance(n, k, s).unwrap();
        let kind = BaselineKind::ALL[which];
        let mut sm = sim(&inst, s);
        let (pi, state) = baseline_explore_detailed(kind, &mut sm, budget).unwrap();
        prop_assert_eq!(sm.rounds(), budget);
        prop_assert_eq!(state.pulls.total(), budget);
        prop_assert!(RegretEvaluator::new(&inst).unwrap().regret(&pi).unwrap() >= 0.0);

        let again = baseline_explore(kind, &mut sim(&inst, s), budget).unwrap();
        prop_assert_eq!(pi, again);
    }
}
