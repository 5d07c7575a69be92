//! Parameter sweeps over the desk-scale instance.

use std::fmt;
use std::str::FromStr;

use super::experiment::{run_prepared, PreparedInstance, RunReport};
use super::generators::gen_paper_instance;
use crate::baselines::Algo;
use crate::env::CausalInstance;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Vary the exploration budget `T`.
    Budget,
    /// Vary the intermediate threshold `m`, and with it λ.
    Lambda,
    /// Vary the number of intermediate contexts `k`.
    Contexts,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Budget => "budget",
            Axis::Lambda => "lambda",
            Axis::Contexts => "contexts",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "budget" => Ok(Axis::Budget),
            "lambda" => Ok(Axis::Lambda),
            "contexts" => Ok(Axis::Contexts),
            _ => Err(Error::Param(format!("unknown sweep axis `{s}`"))),
        }
    }
}

/// Parameters of [`gen_paper_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperParams {
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    pub m: usize,
    pub seed: u64,
}

impl Default for PaperParams {
    fn default() -> Self {
        Self {
            n: 10,
            k: 10,
            eps: 0.3,
            m: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    /// Values along the axis; non-empty and strictly increasing.
    pub grid: Vec<u64>,
    pub base: PaperParams,
    /// Fixed instance for budget sweeps; overrides `base` when set.
    pub instance: Option<CausalInstance>,
    pub budget: u64,
    pub runs: usize,
    pub master_seed: u64,
    pub jobs: usize,
}

impl SweepSpec {
    pub fn check(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Param("sweep grid is empty".into()));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Param("sweep grid must be strictly increasing".into()));
        }
        if self.instance.is_some() && self.axis != Axis::Budget {
            return Err(Error::Param(format!(
                "a fixed instance only supports the budget axis, not {}",
                self.axis
            )));
        }
        Ok(())
    }

    fn instance_at(&self, value: u64) -> Result<CausalInstance> {
        if let Some(inst) = &self.instance {
            return Ok(inst.clone());
        }
        let mut p = self.base;
        match self.axis {
            Axis::Budget => {}
            Axis::Lambda => p.m = value as usize,
            Axis::Contexts => p.k = value as usize,
        }
        gen_paper_instance(p.n, p.k, p.eps, p.m, p.seed)
    }
}

/// One report per (grid point, algorithm), grid-major. Every grid point uses
/// the same master seed.
pub fn sweep(spec: &SweepSpec, algos: &[Algo]) -> Result<Vec<RunReport>> {
    if algos.is_empty() {
        return Err(Error::Param("no algorithms to sweep".into()));
    }
    spec.check()?;
    let mut reports = Vec::with_capacity(spec.grid.len() * algos.len());
    let mut fixed: Option<PreparedInstance> = None;
    for &value in &spec.grid {
        let prepared = match (spec.axis, &fixed) {
            (Axis::Budget, Some(p)) => p.clone(),
            _ => PreparedInstance::new(spec.instance_at(value)?)?,
        };
        let budget = if spec.axis == Axis::Budget { value } else { spec.budget };
        for &algo in algos {
            reports.push(run_prepared(&prepared, algo, budget, spec.runs, spec.master_seed, spec.jobs)?);
        }
        if spec.axis == Axis::Budget {
            fixed = Some(prepared);
        }
    }
    Ok(reports)
}
