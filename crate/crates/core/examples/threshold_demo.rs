// Causal threshold and rare set for a few variable probability vectors.
//
//     cargo run --example threshold_demo

use adaptive_ccb::bench::threshold_recipe;
use adaptive_ccb::thresholds::causal_threshold;

fn main() -> adaptive_ccb::Result<()> {
    let cases: Vec<(&str, Vec<f64>)> = vec![
        ("fair coins", vec![0.5; 6]),
        ("recipe m=4", threshold_recipe(6, 4)),
        ("all zero", vec![0.0; 6]),
        ("skewed", vec![0.02, 0.1, 0.3, 0.5, 0.97, 0.6]),
    ];
    for (name, q) in cases {
        let t = causal_threshold(&q)?;
        let rare: Vec<String> = t.rare_set.iter().map(ToString::to_string).collect();
        println!("{name:<12} m = {:<2} rare = {{{}}}", t.m, rare.join(", "));
    }
    Ok(())
}
