//! Cuts edges whose flowed weight exceeds the mean, drops dead nodes and
//! reports the FLOPs saved.
//!
//! `cargo run --example prune -- [out_dir]`

use std::path::PathBuf;

use riccinets::curvature::MassParams;
use riccinets::flow::{prune, run_flow, CostModel, FlowConfig};
use riccinets::graph::{to_dag, write_dot, ws_generate, WsParams};

fn main() -> riccinets::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/prune".into()));
    std::fs::create_dir_all(&out)?;

    let cost = CostModel::default();
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let dag = to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, seed))?)?;
        let state = run_flow(&dag, &MassParams::default(), &FlowConfig::default())?;
        match prune(&dag, &state, &cost) {
            Ok(result) => {
                println!(
                    "seed {seed}: cut {} edges, removed {} edges and {} nodes, FLOPs {:.0} -> {:.0} (ratio {:.3})",
                    result.edges_cut,
                    result.edges_removed,
                    result.nodes_removed,
                    result.flops_before,
                    result.flops_after,
                    result.flops_ratio()
                );
                if seed == 0 {
                    write_dot(result.dag.graph(), out.join("pruned_seed0.dot"))?;
                    std::fs::write(out.join("prune_seed0.csv"), result.to_csv())?;
                }
                ratios.push(result.flops_ratio());
            }
            Err(e) => println!("seed {seed}: {e}"),
        }
    }
    println!("mean FLOPs ratio over {} seeds: {:.3}", ratios.len(), ratios.iter().sum::<f64>() / ratios.len() as f64);
    println!("wrote {}", out.display());
    Ok(())
}
