//! The three estimation phases of convex exploration.
//!
//! Observational reuse: under `do()` at a context, a round in which `X_j`
//! happened to equal `x` is a valid sample for `do(X_j = x)` because the
//! variables are independent. Interventions observed too rarely for this to
//! work (the rare set) are performed explicitly.

use rand::Rng;

use crate::env::{Observation, Simulator};
use crate::error::{Error, Result};
use crate::intervention::Intervention;
use crate::matrix::Matrix;
use crate::optim::{allocate_rounds, FrequencyVector};
use crate::thresholds::{causal_threshold, QEstimator};

/// Threshold assumed for a context that was never visited.
pub const DEFAULT_THRESHOLD: usize = 2;
/// Reward estimate for an `(intervention, context)` pair never observed.
pub const DEFAULT_REWARD: f64 = 0.0;

/// Explicit pulls per start intervention and per (context intervention, context).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullCounter {
    k: usize,
    pub start: Vec<u64>,
    /// Row-major `N × k`.
    pub context: Vec<u64>,
}

impl PullCounter {
    pub fn new(num_interventions: usize, k: usize) -> Self {
        Self {
            k,
            start: vec![0; num_interventions],
            context: vec![0; num_interventions * k],
        }
    }

    pub fn record(&mut self, o: &Observation) {
        self.start[o.start_intervention.index()] += 1;
        self.context[o.context_intervention.index() * self.k + o.context] += 1;
    }

    pub fn merge(&mut self, other: &PullCounter) {
        for (a, b) in self.start.iter_mut().zip(&other.start) {
            *a += b;
        }
        for (a, b) in self.context.iter_mut().zip(&other.context) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.start.iter().sum()
    }
}

/// Interventions observed by a realization under `do()`: `do()` itself and
/// `do(X_j = X_j)` for every `j`.
fn observed_arms(realization: &[bool]) -> impl Iterator<Item = usize> + '_ {
    std::iter::once(0).chain(
        realization
            .iter()
            .enumerate()
            .map(|(j, &x)| Intervention::set(j, x).index()),
    )
}

/// Normalize count rows into a transition estimate; rows without data are
/// left at zero and flagged.
pub(crate) fn normalize_rows(counts: &[u64], rows: usize, k: usize) -> (Matrix, Vec<bool>) {
    let mut p = Matrix::zeros(rows, k);
    let mut never = vec![false; rows];
    for a in 0..rows {
        let c = &counts[a * k..(a + 1) * k];
        let total: u64 = c.iter().sum();
        if total == 0 {
            never[a] = true;
            continue;
        }
        for (dst, &v) in p.row_mut(a).iter_mut().zip(c) {
            *dst = v as f64 / total as f64;
        }
    }
    (p, never)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionEstimate {
    pub p_hat: Matrix,
    /// Rows with no data (left at zero).
    pub never_pulled: Vec<bool>,
    pub m0: usize,
    pub rare0: Vec<Intervention>,
    pub pulls: PullCounter,
}

/// First half: `do()` at context 0, estimating `q⁰`, the rare set and every
/// non-rare row from observational counts. Second half: each rare
/// intervention performed explicitly, `⌊(T'/2)/|rare|⌋` times; leftover rounds
/// (or the whole half, if the rare set is empty) go to more `do()`.
pub fn estimate_transitions<R: Rng>(sim: &mut Simulator<'_, R>, budget: u64) -> Result<TransitionEstimate> {
    let (n, k, big_n) = (sim.n(), sim.k(), sim.num_interventions());
    if budget < 2 * big_n as u64 {
        return Err(Error::Budget {
            phase: "transition estimation",
            budget,
            min: 2 * big_n as u64,
        });
    }
    let second = budget / 2;
    let first = budget - second;

    let mut pulls = PullCounter::new(big_n, k);
    let mut observational = vec![0u64; big_n * k];
    let mut direct = vec![0u64; big_n * k];
    let mut q_est = QEstimator::new(n);

    let observe = |sim: &mut Simulator<'_, R>, pulls: &mut PullCounter, obs_counts: &mut [u64]| -> Result<Observation> {
        let o = sim.pull(Intervention::DoNothing, |_| Intervention::DoNothing)?;
        for a in observed_arms(&o.start_realization) {
            obs_counts[a * k + o.context] += 1;
        }
        pulls.record(&o);
        Ok(o)
    };

    for _ in 0..first {
        let o = observe(sim, &mut pulls, &mut observational)?;
        q_est.record(&o.start_realization);
    }
    let threshold = causal_threshold(&q_est.estimate().expect("first half is non-empty"))?;
    let rare = threshold.rare_set.clone();

    let (per_rare, extra_do) = if rare.is_empty() {
        (0, second)
    } else {
        let per = second / rare.len() as u64;
        (per, second - per * rare.len() as u64)
    };
    for _ in 0..extra_do {
        observe(sim, &mut pulls, &mut observational)?;
    }
    for &a in &rare {
        for _ in 0..per_rare {
            let o = sim.pull(a, |_| Intervention::DoNothing)?;
            direct[a.index() * k + o.context] += 1;
            pulls.record(&o);
        }
    }

    let rare_mask = threshold.rare_mask();
    let merged: Vec<u64> = (0..big_n * k)
        .map(|idx| if rare_mask[idx / k] { direct[idx] } else { observational[idx] })
        .collect();
    let (p_hat, never_pulled) = normalize_rows(&merged, big_n, k);
    Ok(TransitionEstimate {
        p_hat,
        never_pulled,
        m0: threshold.m,
        rare0: rare,
        pulls,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalParamEstimate {
    pub m_hat: Vec<usize>,
    /// Contexts never visited, whose threshold is the default.
    pub defaulted: Vec<bool>,
    pub context_visits: Vec<u64>,
    pub pulls: PullCounter,
}

/// Perform start interventions according to `½(f̃ + uniform)`, `do()` at
/// every reached context, and estimate each context's threshold from the
/// observed variables.
pub fn estimate_causal_params<R: Rng>(
    sim: &mut Simulator<'_, R>,
    f_tilde: &FrequencyVector,
    budget: u64,
) -> Result<CausalParamEstimate> {
    let (n, k, big_n) = (sim.n(), sim.k(), sim.num_interventions());
    if budget < big_n as u64 {
        return Err(Error::Budget {
            phase: "causal parameter estimation",
            budget,
            min: big_n as u64,
        });
    }
    if f_tilde.len() != big_n {
        return Err(Error::Dimension("f̃ length differs from the number of interventions".into()));
    }
    let f = FrequencyVector::average(&[f_tilde, &FrequencyVector::uniform(big_n)])?;
    let alloc = allocate_rounds(&f, budget);

    let mut pulls = PullCounter::new(big_n, k);
    let mut q_est = vec![QEstimator::new(n); k];
    for (idx, &rounds) in alloc.iter().enumerate() {
        let a = Intervention::from_index(idx, n).expect("index in range");
        for _ in 0..rounds {
            let o = sim.pull(a, |_| Intervention::DoNothing)?;
            q_est[o.context].record(&o.context_realization);
            pulls.record(&o);
        }
    }

    let mut m_hat = Vec::with_capacity(k);
    let mut defaulted = Vec::with_capacity(k);
    for est in &q_est {
        match est.estimate() {
            Some(q) => {
                m_hat.push(causal_threshold(&q)?.m);
                defaulted.push(false);
            }
            None => {
                m_hat.push(DEFAULT_THRESHOLD);
                defaulted.push(true);
            }
        }
    }
    Ok(CausalParamEstimate {
        m_hat,
        defaulted,
        context_visits: q_est.iter().map(QEstimator::samples).collect(),
        pulls,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewardEstimate {
    pub r_hat: Matrix,
    /// Row-major `N × k`: whether the entry is backed by at least one sample.
    pub observed: Vec<bool>,
    /// Rare set of each context, as estimated in the first half.
    pub rare_sets: Vec<Vec<Intervention>>,
    pub pulls: PullCounter,
}

#[derive(Clone, Copy, Default)]
struct Mean {
    sum: u64,
    count: u64,
}

impl Mean {
    fn add(&mut self, reward: bool) {
        self.sum += reward as u64;
        self.count += 1;
    }
}

/// Start interventions follow `⅓(f̂* + f̃ + uniform)` in both halves. First
/// half: `do()` at the reached context; every non-rare intervention is
/// estimated from the rounds that observed it. Second half: each context
/// cycles through its rare set explicitly.
pub fn estimate_rewards<R: Rng>(
    sim: &mut Simulator<'_, R>,
    f_star: &FrequencyVector,
    f_tilde: &FrequencyVector,
    budget: u64,
) -> Result<RewardEstimate> {
    let (n, k, big_n) = (sim.n(), sim.k(), sim.num_interventions());
    if budget < 2 * big_n as u64 {
        return Err(Error::Budget {
            phase: "reward estimation",
            budget,
            min: 2 * big_n as u64,
        });
    }
    if f_star.len() != big_n || f_tilde.len() != big_n {
        return Err(Error::Dimension("frequency vector length differs from the number of interventions".into()));
    }
    let f = FrequencyVector::average(&[f_star, f_tilde, &FrequencyVector::uniform(big_n)])?;
    let second = budget / 2;
    let first = budget - second;
    let alloc_first = allocate_rounds(&f, first);
    let alloc_second = allocate_rounds(&f, second);

    let mut pulls = PullCounter::new(big_n, k);
    let mut observational = vec![Mean::default(); big_n * k];
    let mut direct = vec![Mean::default(); big_n * k];
    let mut q_est = vec![QEstimator::new(n); k];

    let tally = |obs: &mut [Mean], o: &Observation| {
        for b in observed_arms(&o.context_realization) {
            obs[b * k + o.context].add(o.reward);
        }
    };

    for (idx, &rounds) in alloc_first.iter().enumerate() {
        let a = Intervention::from_index(idx, n).expect("index in range");
        for _ in 0..rounds {
            let o = sim.pull(a, |_| Intervention::DoNothing)?;
            q_est[o.context].record(&o.context_realization);
            tally(&mut observational, &o);
            pulls.record(&o);
        }
    }

    let all_set: Vec<Intervention> = Intervention::all(n).skip(1).collect();
    let rare_sets: Vec<Vec<Intervention>> = q_est
        .iter()
        .map(|est| match est.estimate() {
            Some(q) => causal_threshold(&q).map(|t| t.rare_set),
            None => Ok(all_set.clone()),
        })
        .collect::<Result<_>>()?;

    let mut cursor = vec![0usize; k];
    for (idx, &rounds) in alloc_second.iter().enumerate() {
        let a = Intervention::from_index(idx, n).expect("index in range");
        for _ in 0..rounds {
            let o = sim.pull(a, |ctx| {
                let rare = &rare_sets[ctx];
                if rare.is_empty() {
                    Intervention::DoNothing
                } else {
                    let b = rare[cursor[ctx] % rare.len()];
                    cursor[ctx] += 1;
                    b
                }
            })?;
            if o.context_intervention == Intervention::DoNothing {
                tally(&mut observational, &o);
            } else {
                direct[o.context_intervention.index() * k + o.context].add(o.reward);
            }
            pulls.record(&o);
        }
    }

    let mut r_hat = Matrix::zeros(big_n, k);
    let mut observed = vec![false; big_n * k];
    for (i, rare) in rare_sets.iter().enumerate() {
        for b in 0..big_n {
            let is_rare = rare.iter().any(|a| a.index() == b);
            let mean = if is_rare { direct[b * k + i] } else { observational[b * k + i] };
            if mean.count > 0 {
                r_hat.set(b, i, mean.sum as f64 / mean.count as f64);
                observed[b * k + i] = true;
            } else {
                r_hat.set(b, i, DEFAULT_REWARD);
            }
        }
    }
    Ok(RewardEstimate {
        r_hat,
        observed,
        rare_sets,
        pulls,
    })
}
