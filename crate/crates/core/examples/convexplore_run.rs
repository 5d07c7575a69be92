// One convex-exploration run, printing what each phase learned.
//
//     cargo run --release --example convexplore_run -- [T] [seed]

use adaptive_ccb::bench::{gen_paper_instance, RegretEvaluator};
use adaptive_ccb::env::Simulator;
use adaptive_ccb::explore::conv_explore;
use adaptive_ccb::Intervention;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> adaptive_ccb::Result<()> {
    let mut args = std::env::args().skip(1);
    let budget: u64 = args.next().map_or(20_000, |s| s.parse().expect("T"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let inst = gen_paper_instance(10, 10, 0.3, 2, 0)?;
    let mut sim = Simulator::new(&inst, ChaCha8Rng::seed_from_u64(seed));
    let (policy, state) = conv_explore(&mut sim, budget)?;

    println!("phases: {:?}", state.phase_rounds);
    println!("start threshold m0 = {}, rare at start: {}", state.m0, state.rare0.len());
    println!("context thresholds: {:?}", state.m_hat);
    let top = |f: &[f64]| {
        let mut v: Vec<(usize, f64)> = f.iter().copied().enumerate().collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1));
        v.iter()
            .take(4)
            .map(|&(a, w)| format!("{}:{w:.3}", Intervention::from_index(a, inst.n).expect("in range")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("f~  top: {}", top(state.f_tilde.as_slice()));
    println!("f^* top: {}", top(state.f_star.as_slice()));
    println!(
        "R^(do(X1=1), context 1) = {:.3}",
        state.r_hat.get(Intervention::set(0, true).index(), 0)
    );
    let ev = RegretEvaluator::new(&inst)?;
    println!("policy: {policy}");
    println!("simple regret: {:.5}", ev.regret(&policy)?);
    Ok(())
}
