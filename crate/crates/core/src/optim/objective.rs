use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `‖P M^{1/2} (Pᵀ f)^{∘-1/2}‖_∞`.
///
/// Contexts whose column of `p` is identically zero are unreachable and are
/// skipped. A reachable context with zero coverage `(Pᵀ f)_i = 0` makes the
/// objective `+∞`.
pub fn objective_value(p: &Matrix, m: &[f64], f: &[f64]) -> Result<f64> {
    check_dims(p, m, Some(f))?;
    let y = p.transpose_mul(f);
    let mut term = vec![0.0; p.cols()];
    for i in 0..p.cols() {
        let reachable = (0..p.rows()).any(|a| p.get(a, i) > 0.0);
        if !reachable {
            continue;
        }
        if y[i] <= 0.0 {
            return Ok(f64::INFINITY);
        }
        term[i] = m[i].sqrt() / y[i].sqrt();
    }
    let value = p
        .iter_rows()
        .map(|row| row.iter().zip(&term).map(|(a, t)| a * t).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    if value.is_nan() {
        return Err(Error::NaN);
    }
    Ok(value)
}

pub(crate) fn check_dims(p: &Matrix, m: &[f64], f: Option<&[f64]>) -> Result<()> {
    if p.rows() == 0 || p.cols() == 0 {
        return Err(Error::Dimension(format!("empty matrix {}x{}", p.rows(), p.cols())));
    }
    if m.len() != p.cols() {
        return Err(Error::Dimension(format!(
            "{} threshold values for {} contexts",
            m.len(),
            p.cols()
        )));
    }
    if let Some(f) = f {
        if f.len() != p.rows() {
            return Err(Error::Dimension(format!(
                "frequency vector of length {} for {} interventions",
                f.len(),
                p.rows()
            )));
        }
    }
    Ok(())
}

/// Smallest context coverage `min_i (Pᵀ f)_i`.
pub fn min_coverage(p: &Matrix, f: &[f64]) -> f64 {
    p.transpose_mul(f).into_iter().fold(f64::INFINITY, f64::min)
}
