//! Instance generators, exact regret, the Monte-Carlo runner and sweeps.

mod experiment;
mod generators;
mod regret;
mod sweep;

pub use experiment::{
    derive_seed, run_experiment, run_prepared, to_csv_string, write_csv, PreparedInstance, RunReport, CSV_HEADER,
};
pub use generators::{
    default_beta, gen_lower_bound_instance, gen_paper_instance, gen_random_instance, lower_bound_variables,
    threshold_recipe,
};
pub use regret::{
    instance_lambda, optimal_policy, simple_regret, true_thresholds, RegretEvaluator, BEST_TOLERANCE,
};
pub use sweep::{sweep, Axis, PaperParams, SweepSpec};
