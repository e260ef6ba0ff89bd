//! Generates a Watts-Strogatz graph, orients it into a computational DAG and
//! writes both as edge lists and Graphviz files.
//!
//! `cargo run --example generate_graph -- [out_dir]`

use std::path::PathBuf;

use riccinets::graph::{to_dag, write_dot, write_graph, ws_generate, WsParams};

fn main() -> riccinets::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/generate_graph".into()));
    std::fs::create_dir_all(&out)?;

    let g = ws_generate(&WsParams::new(32, 4, 0.75, 7))?;
    let dag = to_dag(&g)?;
    write_graph(&g, out.join("graph.txt"))?;
    write_dot(&g, out.join("graph.dot"))?;
    write_graph(dag.graph(), out.join("dag.txt"))?;
    write_dot(dag.graph(), out.join("dag.dot"))?;

    println!("WS(32, 4, 0.75) seed 7: {} nodes, {} edges, connected: {}", g.node_count(), g.edge_count(), g.is_connected());
    println!(
        "DAG: {} interior nodes, {} edges ({} interior), input {} output {}",
        dag.interior_count(),
        dag.edges().len(),
        dag.interior_edge_count(),
        dag.input_node(),
        dag.output_node()
    );
    println!("wrote {}", out.display());
    Ok(())
}
