//! `argmin_f max_a Σ_i P_{a,i} √m_i / √((Pᵀf)_i)` over the simplex.
//!
//! Each row is convex in `f`, so the max is convex but non-smooth. The solver
//! runs entropic mirror descent (multiplicative updates, iterates stay strictly
//! inside the simplex) on a log-sum-exp smoothing of the max. The smoothed
//! gradient is a softmax-weighted combination of row gradients, i.e. an
//! approximate subgradient of the max, which becomes exact as the temperature
//! is driven down by continuation. Steps are chosen by backtracking on the
//! Bregman sufficient-decrease condition; the best iterate under the true
//! objective is returned.

use super::frequency::FrequencyVector;
use super::objective::{check_dims, objective_value};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Stop when the relative objective change falls below this at the final
    /// smoothing level.
    pub rel_tol: f64,
    pub record_trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            rel_tol: 1e-8,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxSolution {
    pub frequencies: FrequencyVector,
    pub objective: f64,
    /// `(iteration, objective at that iterate)`; empty unless requested.
    pub trace: Vec<(usize, f64)>,
    pub iterations: usize,
    pub cap_reached: bool,
}

const MIN_WEIGHT: f64 = 1e-200;
const MAX_EXPONENT: f64 = 50.0;
/// Final smoothing temperature relative to the objective.
const FINAL_TEMPERATURE: f64 = 1e-10;

/// Reduced problem over reachable contexts.
struct Problem {
    rows: usize,
    cols: usize,
    /// P restricted to reachable columns, row-major.
    p: Vec<f64>,
    /// P_{a,i} √m_i, row-major.
    a: Vec<f64>,
}

struct Eval {
    y: Vec<f64>,
    g: Vec<f64>,
    max: f64,
}

impl Problem {
    fn new(p: &Matrix, m: &[f64]) -> Result<Self> {
        let active: Vec<usize> = (0..p.cols())
            .filter(|&i| (0..p.rows()).any(|a| p.get(a, i) > 0.0))
            .collect();
        if active.is_empty() {
            return Err(Error::DegenerateTransitions);
        }
        if m.iter().any(|&v| !v.is_finite() || v <= 0.0) {
            return Err(Error::Param("threshold values must be positive".into()));
        }
        let rows = p.rows();
        let cols = active.len();
        let mut rp = Vec::with_capacity(rows * cols);
        let mut ra = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for &i in &active {
                rp.push(p.get(r, i));
                ra.push(p.get(r, i) * m[i].sqrt());
            }
        }
        let mut prob = Self {
            rows,
            cols,
            p: rp,
            a: ra,
        };
        // work on the objective relative to its value at the uniform vector, so
        // that scaling every m_i leaves the iterates unchanged
        let start = prob.eval(&vec![1.0 / rows as f64; rows]).max;
        if start.is_finite() && start > 0.0 {
            prob.a.iter_mut().for_each(|v| *v /= start);
        }
        Ok(prob)
    }

    fn eval(&self, f: &[f64]) -> Eval {
        let mut y = vec![0.0; self.cols];
        for (r, &w) in f.iter().enumerate() {
            for (yi, &pv) in y.iter_mut().zip(&self.p[r * self.cols..(r + 1) * self.cols]) {
                *yi += w * pv;
            }
        }
        let inv: Vec<f64> = y.iter().map(|&v| 1.0 / v.sqrt()).collect();
        let g: Vec<f64> = (0..self.rows)
            .map(|r| {
                self.a[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(&inv)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        let max = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Eval { y, g, max }
    }

    /// Smoothed max and its softmax weights.
    fn smooth(&self, e: &Eval, mu: f64) -> (f64, Vec<f64>) {
        let mut w: Vec<f64> = e.g.iter().map(|&g| ((g - e.max) / mu).exp()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= s);
        (e.max + mu * s.ln(), w)
    }

    fn gradient(&self, e: &Eval, weights: &[f64]) -> Vec<f64> {
        let mut d = vec![0.0; self.cols];
        for (r, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (di, &av) in d.iter_mut().zip(&self.a[r * self.cols..(r + 1) * self.cols]) {
                *di += w * av;
            }
        }
        for (di, &yi) in d.iter_mut().zip(&e.y) {
            *di *= -0.5 / (yi * yi.sqrt());
        }
        (0..self.rows)
            .map(|r| {
                self.p[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(&d)
                    .map(|(p, d)| p * d)
                    .sum()
            })
            .collect()
    }
}

fn mirror_step(f: &[f64], grad: &[f64], eta: f64) -> Vec<f64> {
    let gmin = grad.iter().copied().fold(f64::INFINITY, f64::min);
    let mut next: Vec<f64> = f
        .iter()
        .zip(grad)
        .map(|(&x, &g)| x * (-(eta * (g - gmin)).min(MAX_EXPONENT)).exp())
        .collect();
    let s: f64 = next.iter().sum();
    next.iter_mut().for_each(|v| *v = (*v / s).max(MIN_WEIGHT));
    next
}

pub fn convex_minmax(p: &Matrix, m: &[f64], opts: SolverOptions) -> Result<MinMaxSolution> {
    check_dims(p, m, None)?;
    let prob = Problem::new(p, m)?;
    let mut f = vec![1.0 / prob.rows as f64; prob.rows];
    let mut cur = prob.eval(&f);
    if cur.max.is_nan() {
        return Err(Error::NaN);
    }

    let mut best_f = f.clone();
    let mut best = cur.max;
    let mut trace = Vec::new();
    if opts.record_trace {
        trace.push((0, cur.max));
    }

    let mu_final = FINAL_TEMPERATURE * cur.max;
    let mut mu = 0.05 * cur.max;
    let mut eta = 1.0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        iterations += 1;
        let (fmu, weights) = prob.smooth(&cur, mu);
        let grad = prob.gradient(&cur, &weights);

        let mut accepted = None;
        for _ in 0..80 {
            let cand = mirror_step(&f, &grad, eta);
            let e = prob.eval(&cand);
            if e.max.is_nan() {
                return Err(Error::NaN);
            }
            if e.max.is_finite() {
                let (fmu_new, _) = prob.smooth(&e, mu);
                let lin: f64 = grad.iter().zip(cand.iter().zip(&f)).map(|(g, (c, x))| g * (c - x)).sum();
                let kl: f64 = cand
                    .iter()
                    .zip(&f)
                    .map(|(&c, &x)| if c > 0.0 { c * (c / x).ln() } else { 0.0 })
                    .sum();
                if fmu_new <= fmu + lin + kl / eta + 1e-15 * fmu.abs() {
                    accepted = Some((cand, e, fmu_new));
                    break;
                }
            }
            eta *= 0.5;
        }

        let stalled = match accepted {
            Some((cand, e, fmu_new)) => {
                let change = (fmu - fmu_new).abs() / fmu.abs().max(f64::MIN_POSITIVE);
                f = cand;
                cur = e;
                eta *= 2.0;
                change < opts.rel_tol
            }
            None => true,
        };

        if cur.max < best {
            best = cur.max;
            best_f.clone_from(&f);
        }
        if opts.record_trace {
            trace.push((iterations, cur.max));
        }

        if stalled {
            if mu <= mu_final {
                converged = true;
                break;
            }
            mu = (mu * 0.2).max(mu_final);
            eta = eta.max(1e-6);
        }
    }

    let frequencies = FrequencyVector::normalized(best_f)?;
    let objective = objective_value(p, m, frequencies.as_slice())?;
    Ok(MinMaxSolution {
        frequencies,
        objective,
        trace,
        iterations,
        cap_reached: !converged,
    })
}
