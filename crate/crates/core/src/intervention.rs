//! Atomic interventions and their canonical enumeration.
//!
//! Every context exposes `N = 2n + 1` interventions. Matrix rows throughout the
//! crate are indexed in the canonical order
//! `do(), do(X_1 = 0), do(X_1 = 1), ..., do(X_n = 0), do(X_n = 1)`.
//! Variables are 0-based in code and 1-based when displayed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Intervention {
    /// Let every variable draw from its natural distribution.
    DoNothing,
    /// Force variable `var` to `value`.
    Set { var: usize, value: bool },
}

impl Intervention {
    /// Number of atomic interventions for `n` variables.
    pub const fn count(n: usize) -> usize {
        2 * n + 1
    }

    pub fn set(var: usize, value: bool) -> Self {
        Intervention::Set { var, value }
    }

    /// Canonical row index.
    pub fn index(self) -> usize {
        match self {
            Intervention::DoNothing => 0,
            Intervention::Set { var, value } => 1 + 2 * var + value as usize,
        }
    }

    pub fn from_index(index: usize, n: usize) -> Option<Self> {
        if index == 0 {
            Some(Intervention::DoNothing)
        } else if index < Self::count(n) {
            let k = index - 1;
            Some(Intervention::Set {
                var: k / 2,
                value: k % 2 == 1,
            })
        } else {
            None
        }
    }

    /// All interventions for `n` variables in canonical order.
    pub fn all(n: usize) -> impl Iterator<Item = Intervention> {
        (0..Self::count(n)).map(move |i| Self::from_index(i, n).expect("index in range"))
    }

    pub fn is_valid(self, n: usize) -> bool {
        match self {
            Intervention::DoNothing => true,
            Intervention::Set { var, .. } => var < n,
        }
    }

    pub fn check(self, n: usize) -> Result<Self> {
        if self.is_valid(n) {
            Ok(self)
        } else {
            Err(Error::InterventionOutOfRange {
                intervention: self.to_string(),
                n,
            })
        }
    }

    /// Whether a realization of the variables "observes" this intervention,
    /// i.e. the intervened variable naturally took the intervened value.
    /// `do()` is observed by every realization.
    pub fn observed_in(self, realization: &[bool]) -> bool {
        match self {
            Intervention::DoNothing => true,
            Intervention::Set { var, value } => realization[var] == value,
        }
    }

    /// Marginal probabilities of the variables after applying the intervention.
    pub fn apply_to_probs(self, q: &[f64]) -> Vec<f64> {
        let mut probs = q.to_vec();
        if let Intervention::Set { var, value } = self {
            probs[var] = if value { 1.0 } else { 0.0 };
        }
        probs
    }
}

impl fmt::Display for Intervention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Intervention::DoNothing => f.pad("do()"),
            Intervention::Set { var, value } => f.pad(&format!("do(X{}={})", var + 1, *value as u8)),
        }
    }
}
