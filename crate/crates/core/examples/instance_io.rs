// Build an instance by hand, check it, save it as JSON and read it back.
//
//     cargo run --example instance_io -- [path]

use adaptive_ccb::env::{CausalInstance, ContextSpec, StructuredMap};
use adaptive_ccb::Intervention;

fn main() -> adaptive_ccb::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "hand_instance.json".into());
    let inst = CausalInstance {
        k: 2,
        n: 2,
        q0: vec![0.5, 0.3],
        // X1 = 1 sends the round to context 1, else X2 = 1 sends it to context 2
        transition_map: StructuredMap::FirstOne {
            per_variable: vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            default: vec![0.5, 0.5],
        },
        contexts: vec![
            ContextSpec {
                q: vec![0.5, 0.5],
                reward_map: StructuredMap::LinearMix {
                    weights: vec![0.5, 0.5],
                    tables: vec![[0.2, 0.6], [0.4, 0.4]],
                },
            },
            ContextSpec {
                q: vec![0.1, 0.5],
                reward_map: StructuredMap::Lookup {
                    subset: vec![0, 1],
                    table: vec![0.1, 0.3, 0.5, 0.9],
                },
            },
        ],
    };
    let report = inst.validate();
    println!("{report}");
    inst.save(&path)?;
    let back = CausalInstance::load(&path)?;
    assert_eq!(back, inst);
    println!("round trip through {path} ok");

    let p = back.true_transition_matrix();
    let r = back.true_reward_matrix();
    for a in Intervention::all(back.n) {
        println!("{a:<9} P = {:?}  R = {:?}", p.row(a.index()), (0..back.k).map(|i| r.get(a.index(), i)).collect::<Vec<_>>());
    }
    Ok(())
}
