// Every explorer on the desk-scale instance with paired seeds.
//
//     cargo run --release --example compare_baselines -- [T] [runs]

use adaptive_ccb::baselines::Algo;
use adaptive_ccb::bench::{gen_paper_instance, run_prepared, PreparedInstance};

fn main() -> adaptive_ccb::Result<()> {
    let mut args = std::env::args().skip(1);
    let budget: u64 = args.next().map_or(20_000, |s| s.parse().expect("T"));
    let runs: usize = args.next().map_or(200, |s| s.parse().expect("runs"));

    let prepared = PreparedInstance::new(gen_paper_instance(10, 10, 0.3, 2, 0)?)?;
    println!("lambda = {:.3}, optimal policy: {}", prepared.lambda, prepared.evaluator.optimal_policy());
    println!("{:<12} {:>12} {:>10} {:>10} {:>8}", "algo", "mean_regret", "stderr", "prob_best", "secs");
    for algo in Algo::ALL {
        let r = run_prepared(&prepared, algo, budget, runs, 7, 0)?;
        println!(
            "{:<12} {:>12.5} {:>10.5} {:>10.3} {:>8.2}",
            algo.name(),
            r.mean_regret,
            r.stderr,
            r.prob_best,
            r.wall_seconds
        );
    }
    Ok(())
}
