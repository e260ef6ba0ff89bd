//! Ollivier-Ricci curvature of every edge under a few mass settings. A bridge
//! between two cliques is the most negatively curved edge.
//!
//! `cargo run --example curvature -- [out_dir]`

use std::path::PathBuf;

use riccinets::curvature::{curvature_map, MassContext, MassParams};
use riccinets::graph::{to_dag, ws_generate, Edge, Graph, WsParams};

fn barbell() -> Graph {
    let mut edges = Vec::new();
    for base in [0, 4] {
        for a in base..base + 4 {
            for b in a + 1..base + 4 {
                edges.push(Edge::new(a, b, 1.0));
            }
        }
    }
    edges.push(Edge::new(3, 4, 1.0));
    Graph::new(8, false, edges).expect("valid barbell")
}

fn main() -> riccinets::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/curvature".into()));
    std::fs::create_dir_all(&out)?;

    let bell = barbell();
    let map = curvature_map(&bell, &MassContext::from_graph(&bell), &MassParams::new(0.5, 1.0, 0.0)?)?;
    for ((u, v), c) in map.edges.iter().zip(&map.values) {
        println!("barbell {u}-{v}: kappa {:+.4}", c.kappa);
    }

    let dag = to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, 7))?)?;
    let ctx = MassContext::from_dag(&dag);
    for (name, p) in [("default", MassParams::default()), ("lazy", MassParams::new(0.9, 0.5, 0.2)?), ("dirac", MassParams::new(1.0, 0.3, 0.3)?)] {
        let map = curvature_map(dag.graph(), &ctx, &p)?;
        let k = map.kappas();
        let mean = k.iter().sum::<f64>() / k.len() as f64;
        let min = k.iter().copied().fold(f64::INFINITY, f64::min);
        let max = k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("WS DAG, {name} masses: kappa mean {mean:+.4} min {min:+.4} max {max:+.4}");
        std::fs::write(out.join(format!("curvature_{name}.csv")), map.to_csv())?;
    }
    println!("wrote {}", out.display());
    Ok(())
}
