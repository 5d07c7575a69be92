// Regret against T for convex exploration and round robin, as CSV on stdout.
//
//     cargo run --release --example regret_sweep -- [runs]

use adaptive_ccb::baselines::{Algo, BaselineKind};
use adaptive_ccb::bench::{sweep, write_csv, Axis, PaperParams, SweepSpec};

fn main() -> adaptive_ccb::Result<()> {
    let runs: usize = std::env::args().nth(1).map_or(100, |s| s.parse().expect("runs"));
    let spec = SweepSpec {
        axis: Axis::Budget,
        grid: vec![1_000, 2_000, 5_000, 10_000],
        base: PaperParams::default(),
        instance: None,
        budget: 0,
        runs,
        master_seed: 2024,
        jobs: 0,
    };
    let reports = sweep(&spec, &[Algo::ConvExplore, Algo::Baseline(BaselineKind::UnifExplore)])?;
    write_csv(std::io::stdout().lock(), &reports, false)
}
