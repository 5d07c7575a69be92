//! Reference explorers: uniform round robin, UCB and Thompson sampling.
//!
//! Every explorer picks a start intervention, then an intervention at the
//! reached context, and keeps only the counts of what it explicitly did (no
//! observational reuse). The returned policy is greedy on the empirical
//! transition and reward matrices, exactly as in convex exploration.
//!
//! UCB scores are `mean + √(2 ln t / pulls)` with unpulled arms first, and
//! Thompson sampling draws from `Beta(1 + successes, 1 + failures)`. At the
//! start state an arm is credited with the terminal reward of its round.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::env::Simulator;
use crate::error::{Error, Result};
use crate::explore::{conv_explore, greedy_policy, Policy, PullCounter};
use crate::intervention::Intervention;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineKind {
    UnifExplore,
    UCBBoth,
    TSBoth,
    RoundRobinStartUCB,
    RoundRobinStartTS,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 5] = [
        BaselineKind::UnifExplore,
        BaselineKind::UCBBoth,
        BaselineKind::TSBoth,
        BaselineKind::RoundRobinStartUCB,
        BaselineKind::RoundRobinStartTS,
    ];

    fn rules(self) -> (Rule, Rule) {
        match self {
            BaselineKind::UnifExplore => (Rule::RoundRobin, Rule::RoundRobin),
            BaselineKind::UCBBoth => (Rule::Ucb, Rule::Ucb),
            BaselineKind::TSBoth => (Rule::Thompson, Rule::Thompson),
            BaselineKind::RoundRobinStartUCB => (Rule::RoundRobin, Rule::Ucb),
            BaselineKind::RoundRobinStartTS => (Rule::RoundRobin, Rule::Thompson),
        }
    }
}

/// Any explorer selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algo {
    ConvExplore,
    Baseline(BaselineKind),
}

impl Algo {
    pub const ALL: [Algo; 6] = [
        Algo::ConvExplore,
        Algo::Baseline(BaselineKind::UnifExplore),
        Algo::Baseline(BaselineKind::UCBBoth),
        Algo::Baseline(BaselineKind::TSBoth),
        Algo::Baseline(BaselineKind::RoundRobinStartUCB),
        Algo::Baseline(BaselineKind::RoundRobinStartTS),
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Algo::ConvExplore => "convexplore",
            Algo::Baseline(BaselineKind::UnifExplore) => "unif",
            Algo::Baseline(BaselineKind::UCBBoth) => "ucb",
            Algo::Baseline(BaselineKind::TSBoth) => "ts",
            Algo::Baseline(BaselineKind::RoundRobinStartUCB) => "rr-ucb",
            Algo::Baseline(BaselineKind::RoundRobinStartTS) => "rr-ts",
        }
    }

    /// Explore for `budget` rounds and return the final policy.
    pub fn explore<R: Rng>(self, sim: &mut Simulator<'_, R>, budget: u64) -> Result<Policy> {
        match self {
            Algo::ConvExplore => conv_explore(sim, budget).map(|(p, _)| p),
            Algo::Baseline(kind) => baseline_explore(kind, sim, budget),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgo(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
enum Rule {
    RoundRobin,
    Ucb,
    Thompson,
}

#[derive(Debug, Clone)]
struct Arms {
    pulls: Vec<u64>,
    successes: Vec<u64>,
    cursor: usize,
}

impl Arms {
    fn new(count: usize) -> Self {
        Self {
            pulls: vec![0; count],
            successes: vec![0; count],
            cursor: 0,
        }
    }

    fn choose<R: Rng>(&mut self, rule: Rule, rng: &mut R) -> usize {
        let count = self.pulls.len();
        match rule {
            Rule::RoundRobin => {
                let a = self.cursor % count;
                self.cursor += 1;
                a
            }
            Rule::Ucb => {
                if let Some(a) = self.pulls.iter().position(|&p| p == 0) {
                    return a;
                }
                let t: u64 = self.pulls.iter().sum::<u64>() + 1;
                let log_t = (t as f64).ln();
                argmax((0..count).map(|a| {
                    let p = self.pulls[a] as f64;
                    self.successes[a] as f64 / p + (2.0 * log_t / p).sqrt()
                }))
            }
            Rule::Thompson => argmax((0..count).map(|a| {
                let s = self.successes[a] as f64;
                let f = (self.pulls[a] - self.successes[a]) as f64;
                Beta::new(1.0 + s, 1.0 + f).expect("positive shape").sample(rng)
            })),
        }
    }

    fn update(&mut self, a: usize, reward: bool) {
        self.pulls[a] += 1;
        self.successes[a] += reward as u64;
    }
}

/// Lowest index among the maxima.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Round robin over start interventions and over each context's interventions.
pub fn unif_explore<R: Rng>(sim: &mut Simulator<'_, R>, budget: u64) -> Result<Policy> {
    baseline_explore(BaselineKind::UnifExplore, sim, budget)
}

pub fn baseline_explore<R: Rng>(kind: BaselineKind, sim: &mut Simulator<'_, R>, budget: u64) -> Result<Policy> {
    baseline_explore_detailed(kind, sim, budget).map(|(p, _)| p)
}

/// Empirical matrices and pull counts of a baseline run.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineState {
    pub p_hat: Matrix,
    pub r_hat: Matrix,
    pub pulls: PullCounter,
}

pub fn baseline_explore_detailed<R: Rng>(
    kind: BaselineKind,
    sim: &mut Simulator<'_, R>,
    budget: u64,
) -> Result<(Policy, BaselineState)> {
    if budget == 0 {
        return Err(Error::Budget {
            phase: "baseline exploration",
            budget,
            min: 1,
        });
    }
    let (n, k, big_n) = (sim.n(), sim.k(), sim.num_interventions());
    let (start_rule, context_rule) = kind.rules();
    // Posterior draws come from their own stream so that the environment's
    // stream is consumed identically by every rule.
    let mut rng = ChaCha8Rng::seed_from_u64(sim.rng().random());
    let iv = |a: usize| Intervention::from_index(a, n).expect("index in range");

    let mut start = Arms::new(big_n);
    let mut contexts = vec![Arms::new(big_n); k];
    let mut transitions = vec![0u64; big_n * k];
    let mut pulls = PullCounter::new(big_n, k);

    for _ in 0..budget {
        let a0 = start.choose(start_rule, &mut rng);
        let o = sim.pull(iv(a0), |ctx| iv(contexts[ctx].choose(context_rule, &mut rng)))?;
        start.update(a0, o.reward);
        contexts[o.context].update(o.context_intervention.index(), o.reward);
        transitions[a0 * k + o.context] += 1;
        pulls.record(&o);
    }

    let (p_hat, _) = crate::explore::normalize_rows(&transitions, big_n, k);
    let mut r_hat = Matrix::zeros(big_n, k);
    for (i, arms) in contexts.iter().enumerate() {
        for a in 0..big_n {
            if arms.pulls[a] > 0 {
                r_hat.set(a, i, arms.successes[a] as f64 / arms.pulls[a] as f64);
            }
        }
    }
    let policy = greedy_policy(&p_hat, &r_hat)?;
    Ok((policy, BaselineState { p_hat, r_hat, pulls }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.name().parse::<Algo>().unwrap(), a);
        }
        assert!(matches!("eps-greedy".parse::<Algo>(), Err(Error::UnknownAlgo(_))));
    }

    #[test]
    fn argmax_takes_lowest_index() {
        assert_eq!(argmax([0.2, 0.7, 0.7].into_iter()), 1);
        assert_eq!(argmax([0.0; 4].into_iter()), 0);
    }

    #[test]
    fn ucb_tries_every_arm_first() {
        let mut arms = Arms::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let order: Vec<usize> = (0..4)
            .map(|_| {
                let a = arms.choose(Rule::Ucb, &mut rng);
                arms.update(a, false);
                a
            })
            .collect();
        assert_eq!(order, vec![0, 1, 2, 3]);
    }
}
