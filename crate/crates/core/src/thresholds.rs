//! Causal observational threshold and rare-intervention sets.
//!
//! Under `do()` the intervention `do(X_j = x)` is "observed" whenever `X_j`
//! naturally takes value `x`, which happens with probability `q_j` or
//! `1 - q_j`. The threshold `m` is the smallest `τ ∈ {2, …, 2n}` such that at
//! most `τ` interventions are observed with probability below `1/τ`; those
//! interventions form the rare set and must be performed explicitly.

use crate::error::{Error, Result};
use crate::intervention::Intervention;

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub m: usize,
    /// Rare interventions in canonical order.
    pub rare_set: Vec<Intervention>,
    /// Observation probability of every `Set` intervention, canonical order
    /// without `do()`: `p[2j] = 1 - q_j`, `p[2j + 1] = q_j`.
    pub obs_probs: Vec<f64>,
}

impl ThresholdResult {
    pub fn is_rare(&self, a: Intervention) -> bool {
        self.rare_set.contains(&a)
    }

    /// Boolean mask over all `2n + 1` interventions.
    pub fn rare_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.obs_probs.len() + 1];
        for a in &self.rare_set {
            mask[a.index()] = true;
        }
        mask
    }
}

fn rare_under(obs_probs: &[f64], tau: usize) -> impl Iterator<Item = usize> + '_ {
    let cut = 1.0 / tau as f64;
    obs_probs
        .iter()
        .enumerate()
        .filter(move |(_, &p)| p < cut)
        .map(|(i, _)| i)
}

pub fn causal_threshold(q: &[f64]) -> Result<ThresholdResult> {
    if q.is_empty() {
        return Err(Error::Empty("variable probabilities"));
    }
    let n = q.len();
    let obs_probs: Vec<f64> = q.iter().flat_map(|&p| [1.0 - p, p]).collect();
    let m = (2..=2 * n)
        .find(|&tau| rare_under(&obs_probs, tau).count() <= tau)
        .unwrap_or(2);
    let rare_set = rare_under(&obs_probs, m)
        .map(|i| Intervention::from_index(i + 1, n).expect("index in range"))
        .collect();
    Ok(ThresholdResult {
        m,
        rare_set,
        obs_probs,
    })
}

/// Running per-variable frequency of `X_j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QEstimator {
    ones: Vec<u64>,
    samples: u64,
}

impl QEstimator {
    pub fn new(n: usize) -> Self {
        Self {
            ones: vec![0; n],
            samples: 0,
        }
    }

    pub fn record(&mut self, realization: &[bool]) {
        for (c, &b) in self.ones.iter_mut().zip(realization) {
            *c += b as u64;
        }
        self.samples += 1;
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn estimate(&self) -> Option<Vec<f64>> {
        (self.samples > 0).then(|| {
            let s = self.samples as f64;
            self.ones.iter().map(|&c| c as f64 / s).collect()
        })
    }
}

/// Coordinate-wise sample mean of a list of realizations.
pub fn empirical_q(realizations: &[Vec<bool>]) -> Result<Vec<f64>> {
    let first = realizations.first().ok_or(Error::Empty("realizations"))?;
    let mut est = QEstimator::new(first.len());
    for r in realizations {
        if r.len() != first.len() {
            return Err(Error::Dimension("realizations of different lengths".into()));
        }
        est.record(r);
    }
    Ok(est.estimate().expect("at least one sample"))
}
