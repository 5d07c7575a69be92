use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-9;

/// A distribution over the start-state interventions.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector(Vec<f64>);

impl FrequencyVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("frequency vector"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Param("frequency vector has negative or non-finite entries".into()));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::Param(format!("frequency vector sums to {s}")));
        }
        Ok(Self(weights))
    }

    /// Clamp negatives to zero and rescale to unit mass.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        for w in &mut weights {
            if !w.is_finite() || *w < 0.0 {
                *w = 0.0;
            }
        }
        let s: f64 = weights.iter().sum();
        if s <= 0.0 {
            return Err(Error::Param("frequency vector has no mass".into()));
        }
        weights.iter_mut().for_each(|w| *w /= s);
        Ok(Self(weights))
    }

    pub fn uniform(len: usize) -> Self {
        Self(vec![1.0 / len as f64; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Equal-weight average of several frequency vectors of the same length.
    pub fn average(parts: &[&FrequencyVector]) -> Result<Self> {
        let len = parts.first().ok_or(Error::Empty("frequency vectors"))?.len();
        if parts.iter().any(|p| p.len() != len) {
            return Err(Error::Dimension("frequency vectors of different lengths".into()));
        }
        let c = 1.0 / parts.len() as f64;
        let w = (0..len)
            .map(|a| c * parts.iter().map(|p| p.0[a]).sum::<f64>())
            .collect();
        Self::normalized(w)
    }
}

/// Split an integer budget according to `f`: `floor(f_a · budget)` rounds per
/// intervention, with the remainder assigned to index 0 (`do()`).
pub fn allocate_rounds(f: &FrequencyVector, budget: u64) -> Vec<u64> {
    let mut alloc: Vec<u64> = f
        .as_slice()
        .iter()
        .map(|&w| (w * budget as f64).floor() as u64)
        .collect();
    let mut total: u64 = alloc.iter().sum();
    while total > budget {
        let (i, _) = alloc
            .iter()
            .enumerate()
            .max_by_key(|(_, &c)| c)
            .expect("non-empty");
        alloc[i] -= 1;
        total -= 1;
    }
    alloc[0] += budget - total;
    alloc
}
