use std::fmt::Write as _;

use super::flops::{flops_estimate, CostModel};
use super::state::FlowState;
use crate::error::{Error, Result};
use crate::fmt::sig9;
use crate::graph::Dag;

/// Outcome of mean-threshold pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneResult {
    pub dag: Dag,
    pub threshold: f64,
    /// Interior edges above the threshold.
    pub edges_cut: usize,
    /// All edges gone, including those dropped with dead nodes.
    pub edges_removed: usize,
    pub nodes_removed: usize,
    pub flops_before: f64,
    pub flops_after: f64,
}

impl PruneResult {
    pub fn flops_ratio(&self) -> f64 {
        self.flops_after / self.flops_before
    }

    /// CSV `threshold,edges_removed,nodes_removed,flops_before,flops_after`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,edges_removed,nodes_removed,flops_before,flops_after\n");
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sig9(self.threshold),
            self.edges_removed,
            self.nodes_removed,
            sig9(self.flops_before),
            sig9(self.flops_after)
        );
        out
    }
}

/// Cuts every interior edge whose final flow weight is strictly above the mean
/// of all final weights, then removes nodes left without an input-to-output path.
/// Edges touching the virtual input or output are never cut directly.
pub fn prune(dag: &Dag, flow: &FlowState, cost: &CostModel) -> Result<PruneResult> {
    let weighted = flow.graph();
    let same_topology = weighted.edge_count() == dag.edges().len()
        && weighted.edges().iter().zip(dag.edges()).all(|(a, b)| (a.u, a.v) == (b.u, b.v));
    if !same_topology {
        return Err(Error::Param("flow state does not belong to this DAG".into()));
    }
    if !flow.converged() {
        log::warn!(
            "pruning an unconverged flow (iteration {}, max delta {:?})",
            flow.iteration(),
            flow.max_delta()
        );
    }
    let weights = weighted.weights();
    let threshold = weights.iter().sum::<f64>() / weights.len() as f64;
    let keep: Vec<bool> = dag
        .edges()
        .iter()
        .zip(&weights)
        .map(|(e, &w)| dag.is_virtual(e) || w <= threshold)
        .collect();
    let edges_cut = keep.iter().filter(|k| !**k).count();
    let weighted_dag = dag.with_weights(&weights)?;
    let (pruned, nodes_removed) = weighted_dag.retain_edges(&keep)?;
    Ok(PruneResult {
        edges_removed: dag.edges().len() - pruned.edges().len(),
        flops_before: flops_estimate(dag, cost),
        flops_after: flops_estimate(&pruned, cost),
        dag: pruned,
        threshold,
        edges_cut,
        nodes_removed,
    })
}
