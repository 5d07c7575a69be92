//! Three-phase convex exploration.
//!
//! The budget `T` is split into thirds (`⌊T/3⌋`, `⌊T/3⌋`, remainder):
//! 1. estimate the transition matrix from context 0 and solve the coverage LP
//!    for `f̃`;
//! 2. estimate every context's threshold `m̂_i` while following `½(f̃ + 1/N)`,
//!    then solve the convex program with `P̂` and `m̂` for `f̂*`;
//! 3. estimate rewards while following `⅓(f̂* + f̃ + 1/N)`.
//!
//! The returned policy is greedy in the estimated expected reward.

mod estimate;

pub(crate) use estimate::normalize_rows;

pub use estimate::{
    estimate_causal_params, estimate_rewards, estimate_transitions, CausalParamEstimate, PullCounter,
    RewardEstimate, TransitionEstimate, DEFAULT_REWARD, DEFAULT_THRESHOLD,
};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::Simulator;
use crate::error::{Error, Result};
use crate::intervention::Intervention;
use crate::matrix::Matrix;
use crate::optim::{convex_minmax, maximin_lp, FrequencyVector, SolverOptions};

/// Values within this distance of the maximum count as ties; ties go to the
/// lowest index.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// A start intervention plus one intervention per intermediate context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Policy {
    pub start: Intervention,
    pub per_context: Vec<Intervention>,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "start {}", self.start)?;
        for (i, a) in self.per_context.iter().enumerate() {
            write!(f, "; context {} -> {}", i + 1, a)?;
        }
        Ok(())
    }
}

fn argmax_lowest(values: impl Iterator<Item = f64>) -> usize {
    let values: Vec<f64> = values.collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .position(|&v| v >= best - TIE_TOLERANCE)
        .unwrap_or(0)
}

/// `π̂(i) = argmax_a R̂(a, i)`, `π̂₀ = argmax_a Σ_i P̂(a, i) R̂(π̂(i), i)`.
pub fn greedy_policy(p_hat: &Matrix, r_hat: &Matrix) -> Result<Policy> {
    if p_hat.rows() != r_hat.rows() || p_hat.cols() != r_hat.cols() {
        return Err(Error::Dimension(format!(
            "P̂ is {}x{} but R̂ is {}x{}",
            p_hat.rows(),
            p_hat.cols(),
            r_hat.rows(),
            r_hat.cols()
        )));
    }
    let rows = p_hat.rows();
    if rows == 0 || rows.is_multiple_of(2) {
        return Err(Error::Dimension(format!("{rows} is not a valid number of interventions")));
    }
    let n = (rows - 1) / 2;
    let k = p_hat.cols();

    let per_context_idx: Vec<usize> = (0..k).map(|i| argmax_lowest(r_hat.column(i).into_iter())).collect();
    let best_reward: Vec<f64> = per_context_idx
        .iter()
        .enumerate()
        .map(|(i, &a)| r_hat.get(a, i))
        .collect();
    let start_idx = argmax_lowest(
        p_hat
            .iter_rows()
            .map(|row| row.iter().zip(&best_reward).map(|(p, r)| p * r).sum::<f64>()),
    );
    let to_iv = |i: usize| Intervention::from_index(i, n).expect("index in range");
    Ok(Policy {
        start: to_iv(start_idx),
        per_context: per_context_idx.into_iter().map(to_iv).collect(),
    })
}

/// Rounds spent in each phase.
pub fn phase_budgets(budget: u64) -> [u64; 3] {
    let third = budget / 3;
    [third, third, budget - 2 * third]
}

/// Everything convex exploration learned along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationState {
    pub p_hat: Matrix,
    pub never_pulled: Vec<bool>,
    pub m0: usize,
    pub rare0: Vec<Intervention>,
    pub m_hat: Vec<usize>,
    pub m_hat_defaulted: Vec<bool>,
    pub r_hat: Matrix,
    /// Row-major `N × k`.
    pub r_hat_observed: Vec<bool>,
    pub context_rare_sets: Vec<Vec<Intervention>>,
    pub f_tilde: FrequencyVector,
    pub f_star: FrequencyVector,
    /// Whether the convex solver stopped on its iteration cap.
    pub solver_cap_reached: bool,
    pub phase_rounds: [u64; 3],
    pub pulls: PullCounter,
}

/// Run convex exploration for `budget` rounds and return the greedy policy.
pub fn conv_explore<R: Rng>(sim: &mut Simulator<'_, R>, budget: u64) -> Result<(Policy, EstimationState)> {
    let big_n = sim.num_interventions() as u64;
    if budget < 6 * big_n {
        return Err(Error::Budget {
            phase: "convex exploration",
            budget,
            min: 6 * big_n,
        });
    }
    let phase_rounds = phase_budgets(budget);

    let trans = estimate_transitions(sim, phase_rounds[0])?;
    let f_tilde = maximin_lp(&trans.p_hat)?;

    let params = estimate_causal_params(sim, &f_tilde, phase_rounds[1])?;
    let m: Vec<f64> = params.m_hat.iter().map(|&v| v as f64).collect();
    let star = convex_minmax(&trans.p_hat, &m, SolverOptions::default())?;

    let rewards = estimate_rewards(sim, &star.frequencies, &f_tilde, phase_rounds[2])?;
    let policy = greedy_policy(&trans.p_hat, &rewards.r_hat)?;

    let mut pulls = trans.pulls.clone();
    pulls.merge(&params.pulls);
    pulls.merge(&rewards.pulls);

    let state = EstimationState {
        p_hat: trans.p_hat,
        never_pulled: trans.never_pulled,
        m0: trans.m0,
        rare0: trans.rare0,
        m_hat: params.m_hat,
        m_hat_defaulted: params.defaulted,
        r_hat: rewards.r_hat,
        r_hat_observed: rewards.observed,
        context_rare_sets: rewards.rare_sets,
        f_tilde,
        f_star: star.frequencies,
        solver_cap_reached: star.cap_reached,
        phase_rounds,
        pulls,
    };
    Ok((policy, state))
}
