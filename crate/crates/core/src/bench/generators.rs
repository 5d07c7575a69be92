//! Instance generators: the desk-scale experimental setup, the lower-bound
//! family and random structured instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::env::{CausalInstance, ContextSpec, RewardMap, StructuredMap, TransitionMap};
use crate::error::{Error, Result};
use crate::intervention::Intervention;

/// Variable probabilities giving threshold exactly `m`: the first `m`
/// variables never take value 1, the rest are fair coins.
pub fn threshold_recipe(n: usize, m: usize) -> Vec<f64> {
    (0..n).map(|j| if j < m { 0.0 } else { 0.5 }).collect()
}

fn constant_reward(r: f64) -> RewardMap {
    StructuredMap::Lookup {
        subset: vec![],
        table: vec![r],
    }
}

/// Reward `base` everywhere except `base + bump` when `X_var = 1`.
fn bumped_reward(var: usize, base: f64, bump: f64) -> RewardMap {
    StructuredMap::Lookup {
        subset: vec![var],
        table: vec![base, base + bump],
    }
}

fn point_mass(k: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[i] = 1.0;
    v
}

/// `n = k` variables and `k` contexts at desk scale.
///
/// Variables at context 0 are fair coins and the transition kernel is a
/// linear mixture in which `X_j = 1` points at "its" context and `X_j = 0` is
/// uniform, weighted so that `do()` reaches every context with probability
/// exactly `1/k`. When `n ≥ k` variable `j` owns context `j mod k`; when
/// `n < k` it owns a contiguous block of contexts. Every intermediate context
/// uses [`threshold_recipe`] with `m`, so its threshold is `m`. Rewards are
/// 0.5 everywhere except `do(X_1 = 1)` at context 1, which pays `0.5 + ε`
/// (observationally that value has probability zero, so `do()` still pays
/// 0.5).
///
/// The construction is deterministic; `seed` is accepted for interface
/// symmetry with the other generators and ignored.
pub fn gen_paper_instance(n: usize, k: usize, eps: f64, m: usize, seed: u64) -> Result<CausalInstance> {
    let _ = seed;
    if k == 0 || n == 0 {
        return Err(Error::Param("n and k must be at least 1".into()));
    }
    if m < 2 || m > n {
        return Err(Error::Param(format!("m = {m} must lie in [2, n = {n}]")));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Param(format!("ε = {eps} must lie in (0, 0.5]")));
    }

    let uniform = vec![1.0 / k as f64; k];
    let mut weights = Vec::with_capacity(n);
    let mut tables = Vec::with_capacity(n);
    if n >= k {
        for j in 0..n {
            let owner = j % k;
            let sharing = (0..n).filter(|l| l % k == owner).count();
            weights.push(1.0 / (k * sharing) as f64);
            tables.push([uniform.clone(), point_mass(k, owner)]);
        }
    } else {
        for j in 0..n {
            let (lo, hi) = (j * k / n, (j + 1) * k / n);
            let mut block = vec![0.0; k];
            for b in &mut block[lo..hi] {
                *b = 1.0 / (hi - lo) as f64;
            }
            weights.push((hi - lo) as f64 / k as f64);
            tables.push([uniform.clone(), block]);
        }
    }

    let contexts = (0..k)
        .map(|i| ContextSpec {
            q: threshold_recipe(n, m),
            reward_map: if i == 0 {
                bumped_reward(0, 0.5, eps)
            } else {
                constant_reward(0.5)
            },
        })
        .collect();
    let inst = CausalInstance {
        k,
        n,
        q0: vec![0.5; n],
        transition_map: StructuredMap::LinearMix { weights, tables },
        contexts,
    };
    inst.ensure_valid()?;
    Ok(inst)
}

/// Number of variables used by [`gen_lower_bound_instance`]: `k - 1`, raised
/// if some context asks for a larger threshold.
pub fn lower_bound_variables(k: usize, m: &[usize]) -> usize {
    m.iter().copied().max().unwrap_or(0).max(k.saturating_sub(1)).max(1)
}

/// Deterministic-transition family on which every explorer pays `Ω(√(λ/T))`.
///
/// All variables at context 0 are 0, so `do()` lands in the last context and
/// `do(X_j = 1)` lands in context `j` for `j < k - 1` (the remaining
/// interventions also land in the last context). Context `ℓ` uses
/// [`threshold_recipe`] with `m[ℓ]`. Rewards are 0.5 except the `target`
/// pair `(context, intervention)`, which pays `0.5 + β`; `β = 0` gives the
/// null instance. The target must be some `do(X_j = 1)` whose variable is
/// never 1 at that context, otherwise `do()` would see the bump too.
pub fn gen_lower_bound_instance(
    k: usize,
    target: (usize, Intervention),
    beta: f64,
    m: &[usize],
) -> Result<CausalInstance> {
    if k < 2 {
        return Err(Error::Param("the lower-bound family needs k ≥ 2".into()));
    }
    if m.len() != k {
        return Err(Error::Dimension(format!("{} thresholds for {k} contexts", m.len())));
    }
    if !(0.0..=1.0 / 3.0).contains(&beta) {
        return Err(Error::Param(format!("β = {beta} must lie in [0, 1/3]")));
    }
    let n = lower_bound_variables(k, m);
    if let Some(&bad) = m.iter().find(|&&v| v < 2 || v > n) {
        return Err(Error::Param(format!("threshold {bad} must lie in [2, {n}]")));
    }
    let (s, arm) = target;
    if s >= k {
        return Err(Error::Param(format!("target context {} does not exist", s + 1)));
    }
    let q_s = threshold_recipe(n, m[s]);
    let var = match arm {
        Intervention::Set { var, value: true } if var < n && q_s[var] == 0.0 => var,
        _ => {
            return Err(Error::Param(format!(
                "target {arm} at context {} must set to 1 a variable whose probability of being 1 there is 0 \
                 (variables 1..={} at that context)",
                s + 1,
                m[s]
            )))
        }
    };

    let per_variable = (0..n).map(|j| point_mass(k, j.min(k - 1))).collect();
    let contexts = (0..k)
        .map(|l| ContextSpec {
            q: threshold_recipe(n, m[l]),
            reward_map: if l == s {
                bumped_reward(var, 0.5, beta)
            } else {
                constant_reward(0.5)
            },
        })
        .collect();
    let inst = CausalInstance {
        k,
        n,
        q0: vec![0.0; n],
        transition_map: StructuredMap::FirstOne {
            per_variable,
            default: point_mass(k, k - 1),
        },
        contexts,
    };
    inst.ensure_valid()?;
    Ok(inst)
}

/// `β = min(1/3, √(Σ m_ℓ / (18 T)))`.
pub fn default_beta(m: &[usize], budget: u64) -> Result<f64> {
    if budget == 0 {
        return Err(Error::Param("budget must be at least 1".into()));
    }
    if m.iter().any(|&v| v < 2) {
        return Err(Error::Param("thresholds must be at least 2".into()));
    }
    let total: usize = m.iter().sum();
    Ok((1.0f64 / 3.0).min((total as f64 / (18.0 * budget as f64)).sqrt()))
}

fn dirichlet<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    let gamma = Gamma::<f64>::new(1.0, 1.0).expect("valid shape");
    let mut v: Vec<f64> = (0..len).map(|_| gamma.sample(rng).max(1e-12)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn random_map<O, R: Rng>(n: usize, rng: &mut R, mut outcome: impl FnMut(&mut R) -> O) -> StructuredMap<O> {
    match rng.random_range(0..3) {
        0 => StructuredMap::LinearMix {
            weights: dirichlet(n, rng),
            tables: (0..n).map(|_| [outcome(rng), outcome(rng)]).collect(),
        },
        1 => StructuredMap::FirstOne {
            per_variable: (0..n).map(|_| outcome(rng)).collect(),
            default: outcome(rng),
        },
        _ => {
            let size = rng.random_range(0..=n.min(3));
            let mut vars: Vec<usize> = (0..n).collect();
            for t in 0..size {
                let pick = rng.random_range(t..n);
                vars.swap(t, pick);
            }
            vars.truncate(size);
            StructuredMap::Lookup {
                table: (0..1usize << size).map(|_| outcome(rng)).collect(),
                subset: vars,
            }
        }
    }
}

/// A random valid instance: every kernel is drawn uniformly among the three
/// structured families with Dirichlet(1) distributions and uniform rewards;
/// variable probabilities are uniform on `[0.1, 0.9]`.
pub fn gen_random_instance(n: usize, k: usize, seed: u64) -> Result<CausalInstance> {
    if k == 0 || n == 0 {
        return Err(Error::Param("n and k must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.random_range(0.1..0.9)).collect::<Vec<f64>>();
    let q0 = probs(&mut rng);
    let transition_map: TransitionMap = random_map(n, &mut rng, |r| dirichlet(k, r));
    let contexts = (0..k)
        .map(|_| {
            let q = probs(&mut rng);
            let reward_map = random_map(n, &mut rng, |r| r.random_range(0.0..=1.0));
            ContextSpec { q, reward_map }
        })
        .collect();
    let inst = CausalInstance {
        k,
        n,
        q0,
        transition_map,
        contexts,
    };
    inst.ensure_valid()?;
    Ok(inst)
}
