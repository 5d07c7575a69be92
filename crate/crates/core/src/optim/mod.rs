//! Exploration-design programs: the coverage LP, the convex min-max program
//! and the instance parameter λ built on it.

mod frequency;
mod maximin;
mod minmax;
mod objective;

pub use frequency::{allocate_rounds, FrequencyVector};
pub use maximin::maximin_lp;
pub use minmax::{convex_minmax, MinMaxSolution, SolverOptions};
pub use objective::{min_coverage, objective_value};

use crate::error::Result;
use crate::matrix::Matrix;

/// λ together with its minimizing frequency vector and the solver log.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaResult {
    pub lambda: f64,
    pub minimizer: FrequencyVector,
    pub objective_trace: Vec<(usize, f64)>,
    pub cap_reached: bool,
}

/// `λ = min_f ‖P M^{1/2} (Pᵀ f)^{∘-1/2}‖²_∞`.
pub fn lambda_of(p: &Matrix, m: &[f64]) -> Result<LambdaResult> {
    let sol = convex_minmax(
        p,
        m,
        SolverOptions {
            record_trace: true,
            ..SolverOptions::default()
        },
    )?;
    Ok(LambdaResult {
        lambda: sol.objective * sol.objective,
        minimizer: sol.frequencies,
        objective_trace: sol.trace,
        cap_reached: sol.cap_reached,
    })
}
