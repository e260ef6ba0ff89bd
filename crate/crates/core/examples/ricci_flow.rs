//! Runs discrete Ricci flow to convergence and prints the weight trace.
//!
//! `cargo run --example ricci_flow -- [out_dir]`

use std::path::PathBuf;

use riccinets::curvature::MassParams;
use riccinets::flow::{run_flow, FlowConfig};
use riccinets::graph::{to_dag, write_graph, ws_generate, WsParams};

fn main() -> riccinets::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/ricci_flow".into()));
    std::fs::create_dir_all(&out)?;

    let dag = to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, 7))?)?;
    let state = run_flow(&dag, &MassParams::default(), &FlowConfig::default())?;
    for row in state.trace().iter().step_by(5) {
        println!("iter {:>3}: max |dw| {:.3e}, w in [{:.4}, {:.4}], sum {:.6}", row.k, row.max_delta, row.min_w, row.max_w, row.sum_w);
    }
    println!("converged: {} after {} iterations", state.converged(), state.iteration());

    write_graph(state.graph(), out.join("flow.txt"))?;
    std::fs::write(out.join("flow_trace.csv"), state.trace_csv())?;
    println!("wrote {}", out.display());
    Ok(())
}
