//! Exact policy values and simple regret from the closed-form matrices.

use crate::env::CausalInstance;
use crate::error::{Error, Result};
use crate::explore::{greedy_policy, Policy};
use crate::matrix::{RewardMatrix, TransitionMatrix};
use crate::optim::lambda_of;
use crate::thresholds::causal_threshold;

/// Regret at or below this counts as finding the best policy.
pub const BEST_TOLERANCE: f64 = 1e-12;

/// Caches the true matrices of an instance for repeated regret evaluation.
#[derive(Debug, Clone)]
pub struct RegretEvaluator {
    p: TransitionMatrix,
    r: RewardMatrix,
    optimal: Policy,
    optimal_value: f64,
}

impl RegretEvaluator {
    pub fn new(inst: &CausalInstance) -> Result<Self> {
        inst.ensure_valid()?;
        let p = inst.true_transition_matrix();
        let r = inst.true_reward_matrix();
        let optimal = greedy_policy(&p, &r)?;
        let optimal_value = value_of(&p, &r, &optimal);
        Ok(Self {
            p,
            r,
            optimal,
            optimal_value,
        })
    }

    pub fn optimal_policy(&self) -> &Policy {
        &self.optimal
    }

    pub fn optimal_value(&self) -> f64 {
        self.optimal_value
    }

    pub fn value(&self, pi: &Policy) -> Result<f64> {
        let n = (self.p.rows() - 1) / 2;
        if pi.per_context.len() != self.p.cols()
            || !pi.start.is_valid(n)
            || pi.per_context.iter().any(|a| !a.is_valid(n))
        {
            return Err(Error::Dimension(format!("policy {pi} does not fit the instance")));
        }
        Ok(value_of(&self.p, &self.r, pi))
    }

    /// `μ(π*) − μ(π)`, clamped at 0 against rounding.
    pub fn regret(&self, pi: &Policy) -> Result<f64> {
        Ok((self.optimal_value - self.value(pi)?).max(0.0))
    }
}

/// `μ(π) = Σ_i P(π₀, i) R(π(i), i)`.
fn value_of(p: &TransitionMatrix, r: &RewardMatrix, pi: &Policy) -> f64 {
    let row = p.row(pi.start.index());
    pi.per_context
        .iter()
        .enumerate()
        .map(|(i, a)| row[i] * r.get(a.index(), i))
        .sum()
}

/// Optimal policy of an instance (lowest index on ties) and its value.
pub fn optimal_policy(inst: &CausalInstance) -> Result<(Policy, f64)> {
    let ev = RegretEvaluator::new(inst)?;
    Ok((ev.optimal.clone(), ev.optimal_value))
}

pub fn simple_regret(inst: &CausalInstance, pi: &Policy) -> Result<f64> {
    RegretEvaluator::new(inst)?.regret(pi)
}

/// True threshold of every intermediate context.
pub fn true_thresholds(inst: &CausalInstance) -> Result<Vec<usize>> {
    inst.contexts.iter().map(|c| causal_threshold(&c.q).map(|t| t.m)).collect()
}

/// λ of an instance from its true transition matrix and thresholds.
pub fn instance_lambda(inst: &CausalInstance) -> Result<f64> {
    let m: Vec<f64> = true_thresholds(inst)?.into_iter().map(|v| v as f64).collect();
    Ok(lambda_of(&inst.true_transition_matrix(), &m)?.lambda)
}
