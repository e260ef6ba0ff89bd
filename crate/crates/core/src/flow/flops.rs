use serde::{Deserialize, Serialize};

use crate::graph::Dag;

/// Desk-scale cost model: every interior node aggregates its inputs
/// (`2 * in_degree * width` FLOPs) then applies a dense `width x width` unit
/// (`2 * width^2`); the classifier adds `2 * width * classes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub width: usize,
    pub classes: usize,
}

impl Default for CostModel {
    fn default() -> Self {
        Self { width: 8, classes: 3 }
    }
}

/// FLOPs per forward pass of the network mapped from `dag`.
pub fn flops_estimate(dag: &Dag, cost: &CostModel) -> f64 {
    let d = cost.width as f64;
    let indeg = dag.graph().in_degrees();
    let nodes: f64 = dag
        .interior_nodes()
        .map(|x| 2.0 * indeg[x] as f64 * d + 2.0 * d * d)
        .sum();
    nodes + 2.0 * d * cost.classes as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{to_dag, Edge, Graph};

    fn chain(n: usize) -> Dag {
        let edges = (1..n).map(|i| Edge::new(i - 1, i, 1.0)).collect();
        to_dag(&Graph::new(n, false, edges).unwrap()).unwrap()
    }

    #[test]
    fn chain_of_three() {
        let cost = CostModel { width: 4, classes: 3 };
        assert_eq!(flops_estimate(&chain(3), &cost), 120.0 + 24.0);
    }

    #[test]
    fn extra_edge_costs_two_width() {
        let cost = CostModel { width: 4, classes: 3 };
        let tri = to_dag(
            &Graph::new(3, false, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(0, 2, 1.0)]).unwrap(),
        )
        .unwrap();
        // node 2 now has in-degree 2: 16 + 32 = 48
        assert_eq!(flops_estimate(&tri, &cost) - flops_estimate(&chain(3), &cost), 8.0);
    }
}
