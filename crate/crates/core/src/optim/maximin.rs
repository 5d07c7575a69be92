//! `argmax_f min_i (Pᵀ f)_i` over the simplex, solved exactly as a linear program.
//!
//! With every (reachable) column of `P` having a positive entry the game value
//! `v` is positive, and the program is equivalent to
//!
//! ```text
//!   min 1ᵀx  s.t.  Pᵀx ≥ 1, x ≥ 0        (f = x / 1ᵀx, v = 1 / 1ᵀx)
//! ```
//!
//! whose dual `max 1ᵀy s.t. P y ≤ 1, y ≥ 0` starts feasible at the slack basis.
//! We run a dense tableau simplex with Bland's rule on the dual and read `x`
//! off the reduced costs of the slack columns.

use super::frequency::FrequencyVector;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

const PIVOT_EPS: f64 = 1e-12;

pub fn maximin_lp(p: &Matrix) -> Result<FrequencyVector> {
    if p.cols() == 0 {
        return Err(Error::Dimension("maximin over zero contexts".into()));
    }
    if p.rows() == 0 {
        return Err(Error::Empty("transition matrix"));
    }
    let active: Vec<usize> = (0..p.cols())
        .filter(|&i| (0..p.rows()).any(|a| p.get(a, i) > 0.0))
        .collect();
    if active.is_empty() {
        return Err(Error::DegenerateTransitions);
    }

    let rows = p.rows();
    let k = active.len();
    let width = k + rows + 1;
    // constraint rows, then the objective row
    let mut t = vec![0.0; (rows + 1) * width];
    for a in 0..rows {
        for (c, &i) in active.iter().enumerate() {
            t[a * width + c] = p.get(a, i);
        }
        t[a * width + k + a] = 1.0;
        t[a * width + width - 1] = 1.0;
    }
    let obj = rows * width;
    for c in 0..k {
        t[obj + c] = -1.0;
    }
    let mut basis: Vec<usize> = (k..k + rows).collect();

    let max_pivots = 50 * (rows + k) + 1000;
    for _ in 0..max_pivots {
        let Some(enter) = (0..width - 1).find(|&c| t[obj + c] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let coef = t[r * width + enter];
            if coef > PIVOT_EPS {
                let ratio = t[r * width + width - 1] / coef;
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio - 1e-15 || (ratio <= lratio + 1e-15 && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // bounded because every active column has a positive entry
        let (r, _) = leave.ok_or_else(|| Error::Param("maximin LP unbounded".into()))?;
        pivot(&mut t, width, rows + 1, r, enter);
        basis[r] = enter;
    }

    let x: Vec<f64> = (0..rows).map(|a| t[obj + k + a].max(0.0)).collect();
    FrequencyVector::normalized(x)
}

fn pivot(t: &mut [f64], width: usize, height: usize, r: usize, c: usize) {
    let pv = t[r * width + c];
    for v in &mut t[r * width..(r + 1) * width] {
        *v /= pv;
    }
    for rr in 0..height {
        if rr == r {
            continue;
        }
        let factor = t[rr * width + c];
        if factor == 0.0 {
            continue;
        }
        for cc in 0..width {
            t[rr * width + cc] -= factor * t[r * width + cc];
        }
    }
}
