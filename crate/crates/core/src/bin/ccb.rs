use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use adaptive_ccb::baselines::Algo;
use adaptive_ccb::bench::{
    gen_lower_bound_instance, gen_paper_instance, gen_random_instance, run_experiment, sweep, write_csv, Axis,
    PaperParams, SweepSpec,
};
use adaptive_ccb::env::CausalInstance;
use adaptive_ccb::optim::lambda_of;
use adaptive_ccb::{Error, Intervention, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ccb", version, about = "Causal contextual bandits with adaptive context")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Compute λ of an instance.
    Lambda {
        #[arg(long)]
        instance: PathBuf,
        /// Write the solver's objective trace here as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Monte-Carlo simple regret of one explorer.
    Run(RunArgs),
    /// Run explorers along one parameter axis.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Paper,
    Lowerbound,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    /// Intermediate threshold; for `lowerbound` either one value or one per context.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    m: Vec<usize>,
    /// Reward bump of the lower-bound target.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lower-bound target context (1-based).
    #[arg(long, default_value_t = 1)]
    target_context: usize,
    /// Lower-bound target variable (1-based); the target is do(X_j = 1).
    #[arg(long, default_value_t = 1)]
    target_var: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    budget: u64,
    #[arg(long)]
    runs: usize,
    #[arg(long)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
    /// Write 0 in the wall_seconds column so output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    algo: Algo,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    axis: Axis,
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<u64>,
    /// One or more explorers, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "convexplore")]
    algo: Vec<Algo>,
    /// Fixed instance (budget axis only); otherwise the desk-scale generator is used.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Budget for the lambda and contexts axes.
    #[arg(long, default_value_t = 20_000)]
    budget: u64,
    #[arg(long)]
    runs: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    no_timing: bool,
}

fn generate(a: &GenArgs) -> Result<CausalInstance> {
    match a.kind {
        Kind::Paper => match a.m.as_slice() {
            [m] => gen_paper_instance(a.n, a.k, a.eps, *m, a.seed),
            _ => Err(Error::Param("--m takes a single value for --kind paper".into())),
        },
        Kind::Random => gen_random_instance(a.n, a.k, a.seed),
        Kind::Lowerbound => {
            let beta = a
                .beta
                .ok_or_else(|| Error::Param("--beta is required for --kind lowerbound".into()))?;
            let m = match a.m.as_slice() {
                [one] => vec![*one; a.k],
                many => many.to_vec(),
            };
            if a.target_context == 0 || a.target_var == 0 {
                return Err(Error::Param("target context and variable are 1-based".into()));
            }
            let target = (a.target_context - 1, Intervention::set(a.target_var - 1, true));
            gen_lower_bound_instance(a.k, target, beta, &m)
        }
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(a) => {
            let inst = generate(&a)?;
            inst.save(&a.out)?;
            eprintln!("wrote {} (n = {}, k = {})", a.out.display(), inst.n, inst.k);
        }
        Command::Lambda { instance, trace } => {
            let inst = CausalInstance::load(&instance)?;
            let m: Vec<f64> = adaptive_ccb::bench::true_thresholds(&inst)?
                .into_iter()
                .map(|v| v as f64)
                .collect();
            let res = lambda_of(&inst.true_transition_matrix(), &m)?;
            let mut out = io::stdout().lock();
            writeln!(out, "lambda,{}", res.lambda)?;
            writeln!(out, "intervention,frequency")?;
            for (i, f) in res.minimizer.as_slice().iter().enumerate() {
                writeln!(out, "{},{}", Intervention::from_index(i, inst.n).expect("index in range"), f)?;
            }
            if res.cap_reached {
                eprintln!("warning: solver stopped at its iteration cap");
            }
            if let Some(path) = trace {
                let mut w = create(&path)?;
                writeln!(w, "iteration,objective")?;
                for (it, obj) in &res.objective_trace {
                    writeln!(w, "{it},{obj}")?;
                }
                w.flush()?;
            }
        }
        Command::Run(a) => {
            let inst = CausalInstance::load(&a.instance)?;
            let c = &a.common;
            let report = run_experiment(&inst, a.algo, c.budget, c.runs, c.seed, c.jobs)?;
            write_csv(create(&c.out)?, std::slice::from_ref(&report), !c.no_timing)?;
            eprintln!(
                "{}: mean regret {:.6} ± {:.6}, prob_best {:.3}",
                report.algo, report.mean_regret, report.stderr, report.prob_best
            );
        }
        Command::Sweep(a) => {
            let spec = SweepSpec {
                axis: a.axis,
                grid: a.grid,
                base: PaperParams {
                    n: a.n,
                    k: a.k,
                    eps: a.eps,
                    m: a.m,
                    seed: 0,
                },
                instance: a.instance.as_ref().map(CausalInstance::load).transpose()?,
                budget: a.budget,
                runs: a.runs,
                master_seed: a.seed,
                jobs: a.jobs,
            };
            let reports = sweep(&spec, &a.algo)?;
            write_csv(create(&a.out)?, &reports, !a.no_timing)?;
            eprintln!("wrote {} rows to {}", reports.len(), a.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
