// λ on the lower-bound family, where it equals Σ m_ℓ, next to the
// coverage LP and the convex program's allocations.
//
//     cargo run --release --example lambda_lower_bound

use adaptive_ccb::bench::{gen_lower_bound_instance, true_thresholds};
use adaptive_ccb::optim::{lambda_of, maximin_lp, min_coverage};
use adaptive_ccb::Intervention;

fn main() -> adaptive_ccb::Result<()> {
    for m in [vec![2, 2, 2, 2], vec![2, 3, 5, 8], vec![6; 6]] {
        let k = m.len();
        let inst = gen_lower_bound_instance(k, (0, Intervention::set(0, true)), 0.1, &m)?;
        let p = inst.true_transition_matrix();
        let mf: Vec<f64> = true_thresholds(&inst)?.into_iter().map(|v| v as f64).collect();
        let res = lambda_of(&p, &mf)?;
        let lp = maximin_lp(&p)?;
        println!(
            "m = {m:?}: lambda = {:.4} (sum m = {}), LP coverage = {:.4}, solver iterations = {}",
            res.lambda,
            m.iter().sum::<usize>(),
            min_coverage(&p, lp.as_slice()),
            res.objective_trace.last().map_or(0, |t| t.0)
        );
        let nonzero: Vec<String> = res
            .minimizer
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &f)| f > 1e-4)
            .map(|(a, f)| format!("{}:{f:.3}", Intervention::from_index(a, inst.n).expect("in range")))
            .collect();
        println!("    f* = {}", nonzero.join(" "));
    }
    Ok(())
}
