//! Structured kernels mapping a realization of independent binary variables to
//! an outcome (a distribution over contexts, or a reward probability).
//!
//! All three kernels have closed-form expectations under independent
//! Bernoulli inputs, and conditioning on `X_j = x` coincides with forcing
//! `X_j := x` because the inputs are independent.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest lookup subset; tables have `2^MAX_LOOKUP_VARS` entries at most.
pub const MAX_LOOKUP_VARS: usize = 12;

const NORMALIZATION_TOL: f64 = 1e-12;

/// An outcome value: a probability vector over contexts or a scalar in `[0, 1]`.
pub trait Outcome: Clone {
    fn values(&self) -> &[f64];
}

impl Outcome for f64 {
    fn values(&self) -> &[f64] {
        std::slice::from_ref(self)
    }
}

impl Outcome for Vec<f64> {
    fn values(&self) -> &[f64] {
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum StructuredMap<O> {
    /// Pick variable `j` with probability `weights[j]`, then emit `tables[j][X_j]`.
    LinearMix { weights: Vec<f64>, tables: Vec<[O; 2]> },
    /// Emit the outcome of the first variable realized as 1, else `default`.
    FirstOne { per_variable: Vec<O>, default: O },
    /// Emit `table[bits]` where bit `t` of `bits` is `X_{subset[t]}`.
    Lookup { subset: Vec<usize>, table: Vec<O> },
}

/// Kernel whose outcomes are distributions over the `k` contexts.
pub type TransitionMap = StructuredMap<Vec<f64>>;
/// Kernel whose outcomes are reward probabilities.
pub type RewardMap = StructuredMap<f64>;

fn add_scaled(acc: &mut [f64], values: &[f64], w: f64) {
    if w == 0.0 {
        return;
    }
    for (a, v) in acc.iter_mut().zip(values) {
        *a += w * v;
    }
}

fn lookup_index(subset: &[usize], realization: &[bool]) -> usize {
    subset
        .iter()
        .enumerate()
        .fold(0, |acc, (t, &var)| acc | ((realization[var] as usize) << t))
}

impl<O: Outcome> StructuredMap<O> {
    /// Dimension of each outcome.
    pub fn outcome_dim(&self) -> usize {
        match self {
            StructuredMap::LinearMix { tables, .. } => {
                tables.first().map_or(0, |t| t[0].values().len())
            }
            StructuredMap::FirstOne { default, .. } => default.values().len(),
            StructuredMap::Lookup { table, .. } => table.first().map_or(0, |o| o.values().len()),
        }
    }

    /// Every stored outcome together with a human-readable location.
    fn labelled_outcomes(&self) -> Vec<(String, &O)> {
        match self {
            StructuredMap::LinearMix { tables, .. } => tables
                .iter()
                .enumerate()
                .flat_map(|(j, t)| {
                    [
                        (format!("tables[{j}][0]"), &t[0]),
                        (format!("tables[{j}][1]"), &t[1]),
                    ]
                })
                .collect(),
            StructuredMap::FirstOne {
                per_variable,
                default,
            } => per_variable
                .iter()
                .enumerate()
                .map(|(j, o)| (format!("per_variable[{j}]"), o))
                .chain(std::iter::once(("default".to_string(), default)))
                .collect(),
            StructuredMap::Lookup { table, .. } => table
                .iter()
                .enumerate()
                .map(|(b, o)| (format!("table[{b}]"), o))
                .collect(),
        }
    }

    /// Structural checks. `distribution` selects between probability-vector
    /// outcomes of length `dim` and scalar outcomes in `[0, 1]`.
    pub fn violations(&self, n: usize, dim: usize, distribution: bool, label: &str) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            StructuredMap::LinearMix { weights, tables } => {
                if weights.len() != n {
                    out.push(format!("{label}: LinearMix weights have length {} (expected {n})", weights.len()));
                }
                if tables.len() != n {
                    out.push(format!("{label}: LinearMix tables have length {} (expected {n})", tables.len()));
                }
                if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
                    out.push(format!("{label}: LinearMix weights outside [0, 1]"));
                }
                let s: f64 = weights.iter().sum();
                if (s - 1.0).abs() > NORMALIZATION_TOL {
                    out.push(format!("{label}: LinearMix weights sum to {s}"));
                }
            }
            StructuredMap::FirstOne { per_variable, .. } => {
                if per_variable.len() != n {
                    out.push(format!(
                        "{label}: FirstOne per_variable has length {} (expected {n})",
                        per_variable.len()
                    ));
                }
            }
            StructuredMap::Lookup { subset, table } => {
                if subset.len() > MAX_LOOKUP_VARS {
                    out.push(format!("{label}: Lookup subset has {} > {MAX_LOOKUP_VARS} variables", subset.len()));
                } else if table.len() != 1 << subset.len() {
                    out.push(format!(
                        "{label}: Lookup table has {} entries (expected {})",
                        table.len(),
                        1usize << subset.len()
                    ));
                }
                if subset.iter().any(|&v| v >= n) {
                    out.push(format!("{label}: Lookup subset references a variable >= {n}"));
                }
                let mut sorted = subset.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != subset.len() {
                    out.push(format!("{label}: Lookup subset has duplicate variables"));
                }
            }
        }
        for (loc, o) in self.labelled_outcomes() {
            let v = o.values();
            if distribution {
                if v.len() != dim {
                    out.push(format!("{label}.{loc}: outcome has length {} (expected {dim})", v.len()));
                    continue;
                }
                if v.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    out.push(format!("{label}.{loc}: probability outside [0, 1]"));
                }
                let s: f64 = v.iter().sum();
                if (s - 1.0).abs() > NORMALIZATION_TOL {
                    out.push(format!("{label}.{loc}: outcome sums to {s}"));
                }
            } else if !(0.0..=1.0).contains(&v[0]) {
                out.push(format!("{label}.{loc}: reward {} outside [0, 1]", v[0]));
            }
        }
        out
    }

    /// Exact expected outcome when variable `j` is an independent
    /// Bernoulli(`probs[j]`).
    pub fn expected(&self, probs: &[f64]) -> Vec<f64> {
        let dim = self.outcome_dim();
        let mut acc = vec![0.0; dim];
        match self {
            StructuredMap::LinearMix { weights, tables } => {
                for ((&w, t), &p) in weights.iter().zip(tables).zip(probs) {
                    add_scaled(&mut acc, t[1].values(), w * p);
                    add_scaled(&mut acc, t[0].values(), w * (1.0 - p));
                }
            }
            StructuredMap::FirstOne {
                per_variable,
                default,
            } => {
                let mut none_yet = 1.0;
                for (o, &p) in per_variable.iter().zip(probs) {
                    add_scaled(&mut acc, o.values(), none_yet * p);
                    none_yet *= 1.0 - p;
                }
                add_scaled(&mut acc, default.values(), none_yet);
            }
            StructuredMap::Lookup { subset, table } => {
                for (bits, o) in table.iter().enumerate() {
                    let w = subset.iter().enumerate().fold(1.0, |w, (t, &var)| {
                        if bits >> t & 1 == 1 {
                            w * probs[var]
                        } else {
                            w * (1.0 - probs[var])
                        }
                    });
                    add_scaled(&mut acc, o.values(), w);
                }
            }
        }
        acc
    }

    /// `E[outcome · 1{X_j = x}]` under independent Bernoulli(`probs`) inputs,
    /// computed by summing over the joint events the kernel distinguishes.
    pub fn joint_with(&self, probs: &[f64], j: usize, x: bool) -> Vec<f64> {
        let px = if x { probs[j] } else { 1.0 - probs[j] };
        let dim = self.outcome_dim();
        let mut acc = vec![0.0; dim];
        match self {
            StructuredMap::LinearMix { weights, tables } => {
                for (l, (&w, t)) in weights.iter().zip(tables).enumerate() {
                    if l == j {
                        add_scaled(&mut acc, t[x as usize].values(), w * px);
                    } else {
                        let p = probs[l];
                        add_scaled(&mut acc, t[1].values(), w * p * px);
                        add_scaled(&mut acc, t[0].values(), w * (1.0 - p) * px);
                    }
                }
            }
            StructuredMap::FirstOne {
                per_variable,
                default,
            } => {
                // P(X_t = 0 for all t < l, t != j)
                let mut prefix = 1.0;
                let mut j_in_prefix = false;
                for (l, o) in per_variable.iter().enumerate() {
                    let event = if l == j {
                        if x {
                            prefix * probs[j]
                        } else {
                            0.0
                        }
                    } else if j_in_prefix {
                        // X_j = 0 is implied by "first one at l > j"
                        if x {
                            0.0
                        } else {
                            prefix * (1.0 - probs[j]) * probs[l]
                        }
                    } else {
                        prefix * probs[l] * px
                    };
                    add_scaled(&mut acc, o.values(), event);
                    if l == j {
                        j_in_prefix = true;
                    } else {
                        prefix *= 1.0 - probs[l];
                    }
                }
                let all_zero = if x { 0.0 } else { prefix * (1.0 - probs[j]) };
                add_scaled(&mut acc, default.values(), all_zero);
            }
            StructuredMap::Lookup { subset, table } => match subset.iter().position(|&v| v == j) {
                Some(pos) => {
                    for (bits, o) in table.iter().enumerate() {
                        if (bits >> pos & 1 == 1) != x {
                            continue;
                        }
                        let w = subset.iter().enumerate().fold(1.0, |w, (t, &var)| {
                            if bits >> t & 1 == 1 {
                                w * probs[var]
                            } else {
                                w * (1.0 - probs[var])
                            }
                        });
                        add_scaled(&mut acc, o.values(), w);
                    }
                }
                None => {
                    add_scaled(&mut acc, &self.expected(probs), px);
                }
            },
        }
        acc
    }

    /// Exact observational conditional `E[outcome | X_j = x]`; `None` when the
    /// conditioning event has probability zero.
    pub fn conditional(&self, probs: &[f64], j: usize, x: bool) -> Option<Vec<f64>> {
        let px = if x { probs[j] } else { 1.0 - probs[j] };
        if px <= 0.0 {
            return None;
        }
        Some(self.joint_with(probs, j, x).into_iter().map(|v| v / px).collect())
    }

    /// Select the outcome to draw from for a given realization. For
    /// `LinearMix` the mixture component is drawn first, so the returned
    /// outcome is random; the other kernels are deterministic in `realization`.
    pub fn select<'a, R: Rng + ?Sized>(&'a self, realization: &[bool], rng: &mut R) -> &'a O {
        match self {
            StructuredMap::LinearMix { weights, tables } => {
                let u: f64 = rng.random();
                let mut cum = 0.0;
                let mut chosen = weights.len() - 1;
                for (j, &w) in weights.iter().enumerate() {
                    cum += w;
                    if u < cum {
                        chosen = j;
                        break;
                    }
                }
                // skip trailing zero-weight components reached through rounding
                while weights[chosen] == 0.0 && chosen > 0 {
                    chosen -= 1;
                }
                &tables[chosen][realization[chosen] as usize]
            }
            StructuredMap::FirstOne {
                per_variable,
                default,
            } => realization
                .iter()
                .position(|&b| b)
                .map_or(default, |j| &per_variable[j]),
            StructuredMap::Lookup { subset, table } => &table[lookup_index(subset, realization)],
        }
    }
}

/// Draw an index from a probability vector.
pub(crate) fn sample_categorical<R: Rng + ?Sized>(dist: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for (i, &p) in dist.iter().enumerate() {
        cum += p;
        if u < cum {
            return i;
        }
    }
    // rounding: fall back to the last index with positive mass
    dist.iter().rposition(|&p| p > 0.0).unwrap_or(dist.len() - 1)
}
