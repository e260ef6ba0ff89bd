use std::time::Instant;

use super::{EvalReport, Evaluator};
use crate::error::Result;
use crate::flow::{flops_estimate, CostModel};
use crate::graph::Dag;

/// Best pseudo-accuracy the surrogate can award.
pub const SURROGATE_CEILING: f64 = 0.95;

/// Training-free stand-in for smoke runs and controller tests.
///
/// With `r` the path redundancy (edges per node that receives input, i.e. mean
/// in-degree over the interior nodes and the output) and `n` the interior node
/// count, the pseudo-accuracy is
///
/// `chance + (0.95 - chance) * (1 - exp(-r / 2)) * n / (n + 4)`
///
/// which lies in `[chance, 0.95]`, rises with both redundancy and size, and is a
/// pure function of the topology.
pub fn surrogate_accuracy(dag: &Dag, classes: usize) -> f64 {
    let chance = 1.0 / classes.max(1) as f64;
    let n = dag.interior_count() as f64;
    let redundancy = dag.edges().len() as f64 / (n + 1.0);
    chance + (SURROGATE_CEILING - chance) * (1.0 - (-redundancy / 2.0).exp()) * n / (n + 4.0)
}

pub fn surrogate_eval(dag: &Dag, cost: &CostModel) -> EvalReport {
    let start = Instant::now();
    let weights = dag.interior_count() * cost.width * cost.width;
    EvalReport {
        accuracy: surrogate_accuracy(dag, cost.classes),
        flops: flops_estimate(dag, cost),
        weights_total: weights,
        weights_remaining: weights,
        seconds: start.elapsed().as_secs_f64(),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SurrogateEvaluator {
    pub cost: CostModel,
}

impl Evaluator for SurrogateEvaluator {
    fn evaluate(&self, dag: &Dag) -> Result<EvalReport> {
        Ok(surrogate_eval(dag, &self.cost))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{to_dag, ws_generate, Edge, Graph, WsParams};

    #[test]
    fn chain_scores_below_ws() {
        let chain = to_dag(&Graph::new(3, false, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)]).unwrap()).unwrap();
        let ws = to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, 0)).unwrap()).unwrap();
        let cost = CostModel::default();
        let (a, b) = (surrogate_eval(&chain, &cost), surrogate_eval(&ws, &cost));
        assert!(a.accuracy < b.accuracy);
        assert!((0.0..=1.0).contains(&a.accuracy) && (0.0..=1.0).contains(&b.accuracy));
        assert_eq!(b, EvalReport { seconds: b.seconds, ..surrogate_eval(&ws, &cost) });
    }
}
