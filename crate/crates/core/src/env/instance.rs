use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::map::{RewardMap, TransitionMap};
use crate::error::{Error, Result};
use crate::intervention::Intervention;
use crate::matrix::{Matrix, RewardMatrix, TransitionMatrix};

/// One intermediate context: its variable probabilities and reward kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextSpec {
    pub q: Vec<f64>,
    pub reward_map: RewardMap,
}

/// Ground-truth two-layer causal bandit over parallel graphs.
///
/// Context 0 holds `n` independent Bernoulli(`q0`) variables whose realization
/// drives `transition_map` into one of `k` intermediate contexts. Each
/// intermediate context holds its own `n` variables and a reward kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CausalInstance {
    pub k: usize,
    pub n: usize,
    pub q0: Vec<f64>,
    pub transition_map: TransitionMap,
    pub contexts: Vec<ContextSpec>,
}

/// Outcome of [`CausalInstance::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    /// Largest gap between `E[· | X_j = x]` under `do()` and `E[· | do(X_j = x)]`,
    /// over all kernels and all `(j, x)` with a positive conditioning event.
    pub max_identity_violation: f64,
    /// Largest gap in `row(do()) = q_j row(X_j=1) + (1 - q_j) row(X_j=0)`.
    pub max_marginal_violation: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "valid")?;
        } else {
            writeln!(f, "invalid ({} violations)", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
        }
        writeln!(f, "max intervention/conditioning gap: {:e}", self.max_identity_violation)?;
        write!(f, "max marginal-consistency gap: {:e}", self.max_marginal_violation)
    }
}

const IDENTITY_TOL: f64 = 1e-12;

fn probs_ok(q: &[f64]) -> bool {
    q.iter().all(|p| (0.0..=1.0).contains(p))
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

impl CausalInstance {
    /// Number of interventions per context, `N = 2n + 1`.
    pub fn num_interventions(&self) -> usize {
        Intervention::count(self.n)
    }

    /// Check every structural invariant and the intervention/conditioning
    /// identity by closed-form enumeration.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.k == 0 {
            violations.push("k must be at least 1".to_string());
        }
        if self.n == 0 {
            violations.push("n must be at least 1".to_string());
        }
        if self.q0.len() != self.n {
            violations.push(format!("q0 has length {} (expected {})", self.q0.len(), self.n));
        } else if !probs_ok(&self.q0) {
            violations.push("q0 has entries outside [0, 1]".to_string());
        }
        violations.extend(self.transition_map.violations(self.n, self.k, true, "transition_map"));
        if self.contexts.len() != self.k {
            violations.push(format!(
                "{} contexts given (expected k = {})",
                self.contexts.len(),
                self.k
            ));
        }
        for (i, ctx) in self.contexts.iter().enumerate() {
            if ctx.q.len() != self.n {
                violations.push(format!("contexts[{i}].q has length {} (expected {})", ctx.q.len(), self.n));
            } else if !probs_ok(&ctx.q) {
                violations.push(format!("contexts[{i}].q has entries outside [0, 1]"));
            }
            violations.extend(
                ctx.reward_map
                    .violations(self.n, 1, false, &format!("contexts[{i}].reward_map")),
            );
        }

        let mut identity = 0.0f64;
        let mut marginal = 0.0f64;
        if violations.is_empty() {
            let mut check = |q: &[f64], expected: &dyn Fn(&[f64]) -> Vec<f64>, conditional: &dyn Fn(usize, bool) -> Option<Vec<f64>>| {
                let base = expected(q);
                for j in 0..self.n {
                    let mut rows = [Vec::new(), Vec::new()];
                    for x in [false, true] {
                        let forced = Intervention::set(j, x).apply_to_probs(q);
                        let row = expected(&forced);
                        if let Some(cond) = conditional(j, x) {
                            identity = identity.max(max_gap(&cond, &row));
                        }
                        rows[x as usize] = row;
                    }
                    let mixed: Vec<f64> = rows[1]
                        .iter()
                        .zip(&rows[0])
                        .map(|(a, b)| q[j] * a + (1.0 - q[j]) * b)
                        .collect();
                    marginal = marginal.max(max_gap(&base, &mixed));
                }
            };
            check(
                &self.q0,
                &|p| self.transition_map.expected(p),
                &|j, x| self.transition_map.conditional(&self.q0, j, x),
            );
            for ctx in &self.contexts {
                check(
                    &ctx.q,
                    &|p| ctx.reward_map.expected(p),
                    &|j, x| ctx.reward_map.conditional(&ctx.q, j, x),
                );
            }
            if identity > IDENTITY_TOL {
                violations.push(format!("intervention/conditioning identity violated by {identity:e}"));
            }
            if marginal > IDENTITY_TOL {
                violations.push(format!("marginal consistency violated by {marginal:e}"));
            }
        }

        ValidationReport {
            violations,
            max_identity_violation: identity,
            max_marginal_violation: marginal,
        }
    }

    /// Validate and convert the report into an error.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.passed() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(report.violations.join("; ")))
        }
    }

    /// Exact `N × k` transition matrix, rows in canonical intervention order.
    pub fn true_transition_matrix(&self) -> TransitionMatrix {
        let mut p = Matrix::zeros(self.num_interventions(), self.k);
        for a in Intervention::all(self.n) {
            let row = self.transition_map.expected(&a.apply_to_probs(&self.q0));
            p.row_mut(a.index()).copy_from_slice(&row);
        }
        p
    }

    /// Exact `N × k` table of `E[R_i | a]`.
    pub fn true_reward_matrix(&self) -> RewardMatrix {
        let mut r = Matrix::zeros(self.num_interventions(), self.k);
        for (i, ctx) in self.contexts.iter().enumerate() {
            for a in Intervention::all(self.n) {
                let v = ctx.reward_map.expected(&a.apply_to_probs(&ctx.q))[0];
                r.set(a.index(), i, v);
            }
        }
        r
    }

    /// Per-context variable probabilities, context 0 first.
    pub fn q_of(&self, context: Option<usize>) -> &[f64] {
        match context {
            None => &self.q0,
            Some(i) => &self.contexts[i].q,
        }
    }

    /// Parse and validate a JSON instance document.
    pub fn from_json(s: &str) -> Result<Self> {
        let inst: CausalInstance = serde_json::from_str(s)?;
        inst.ensure_valid()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
