//! Monte-Carlo runner: many seeded explorations of one instance, scored by
//! exact simple regret.
//!
//! Run `r` of an experiment with master seed `s` uses a ChaCha8 stream seeded
//! with [`derive_seed`]`(s, r)`. Runs fan out over a rayon pool of the
//! requested size, results are collected in run order and aggregated
//! sequentially, so a report does not depend on the number of workers.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::regret::{instance_lambda, true_thresholds, RegretEvaluator, BEST_TOLERANCE};
use crate::baselines::Algo;
use crate::env::{CausalInstance, Simulator};
use crate::error::{Error, Result};

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run`: `splitmix64(master ⊕ splitmix64(run))`.
pub fn derive_seed(master_seed: u64, run: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(run))
}

/// An instance together with everything needed to score runs on it.
#[derive(Debug, Clone)]
pub struct PreparedInstance {
    pub instance: CausalInstance,
    pub evaluator: RegretEvaluator,
    pub lambda: f64,
    /// Largest true threshold over the intermediate contexts.
    pub m: usize,
}

impl PreparedInstance {
    pub fn new(instance: CausalInstance) -> Result<Self> {
        let evaluator = RegretEvaluator::new(&instance)?;
        let lambda = instance_lambda(&instance)?;
        let m = true_thresholds(&instance)?.into_iter().max().unwrap_or(0);
        Ok(Self {
            instance,
            evaluator,
            lambda,
            m,
        })
    }

    /// Simple regret of one exploration with the given seed.
    pub fn run_once(&self, algo: Algo, budget: u64, seed: u64) -> Result<f64> {
        let mut sim = Simulator::new(&self.instance, ChaCha8Rng::seed_from_u64(seed));
        let policy = algo.explore(&mut sim, budget)?;
        self.evaluator.regret(&policy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algo: Algo,
    pub budget: u64,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub runs: usize,
    pub mean_regret: f64,
    pub stderr: f64,
    /// Fraction of runs whose regret is at most [`BEST_TOLERANCE`].
    pub prob_best: f64,
    pub wall_seconds: f64,
    /// Per-run regrets in run order.
    pub regrets: Vec<f64>,
}

impl RunReport {
    /// Standard error of `prob_best`.
    pub fn prob_best_stderr(&self) -> f64 {
        (self.prob_best * (1.0 - self.prob_best) / self.runs as f64).sqrt()
    }
}

pub const CSV_HEADER: &str = "algo,T,k,n,m,lambda,runs,mean_regret,stderr,prob_best,wall_seconds";

#[derive(Serialize)]
struct CsvRow<'a> {
    algo: &'a str,
    #[serde(rename = "T")]
    budget: u64,
    k: usize,
    n: usize,
    m: usize,
    lambda: f64,
    runs: usize,
    mean_regret: f64,
    stderr: f64,
    prob_best: f64,
    wall_seconds: f64,
}

/// Write reports as CSV. With `timing = false` the wall-clock column is
/// written as 0 so that repeated experiments produce identical bytes.
pub fn write_csv<W: Write>(out: W, reports: &[RunReport], timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow {
            algo: r.algo.name(),
            budget: r.budget,
            k: r.k,
            n: r.n,
            m: r.m,
            lambda: r.lambda,
            runs: r.runs,
            mean_regret: r.mean_regret,
            stderr: r.stderr,
            prob_best: r.prob_best,
            wall_seconds: if timing { r.wall_seconds } else { 0.0 },
        })
        .map_err(csv_error)?;
    }
    if reports.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(reports: &[RunReport], timing: bool) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, reports, timing)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Param(format!("csv: {other:?}")),
    }
}

/// Run `runs` explorations of `algo` on `prepared` with `jobs` worker threads
/// (0 means one per core).
pub fn run_prepared(
    prepared: &PreparedInstance,
    algo: Algo,
    budget: u64,
    runs: usize,
    master_seed: u64,
    jobs: usize,
) -> Result<RunReport> {
    if runs == 0 {
        return Err(Error::Param("runs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Param(format!("worker pool: {e}")))?;

    let started = Instant::now();
    let results: Vec<Result<f64>> = pool.install(|| {
        (0..runs)
            .into_par_iter()
            .map(|run| prepared.run_once(algo, budget, derive_seed(master_seed, run as u64)))
            .collect()
    });
    let wall_seconds = started.elapsed().as_secs_f64();

    let mut regrets = Vec::with_capacity(runs);
    for (run, r) in results.into_iter().enumerate() {
        regrets.push(r.map_err(|e| Error::RunFailed {
            run,
            source: Box::new(e),
        })?);
    }
    let count = runs as f64;
    let mean = regrets.iter().sum::<f64>() / count;
    let stderr = if runs > 1 {
        let var = regrets.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    let best = regrets.iter().filter(|&&r| r <= BEST_TOLERANCE).count();

    Ok(RunReport {
        algo,
        budget,
        k: prepared.instance.k,
        n: prepared.instance.n,
        m: prepared.m,
        lambda: prepared.lambda,
        runs,
        mean_regret: mean,
        stderr,
        prob_best: best as f64 / count,
        wall_seconds,
        regrets,
    })
}

pub fn run_experiment(
    inst: &CausalInstance,
    algo: Algo,
    budget: u64,
    runs: usize,
    master_seed: u64,
    jobs: usize,
) -> Result<RunReport> {
    let prepared = PreparedInstance::new(inst.clone())?;
    run_prepared(&prepared, algo, budget, runs, master_seed, jobs)
}
