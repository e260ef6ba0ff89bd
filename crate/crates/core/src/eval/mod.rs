//! Graph-to-network mapping, the synthetic dataset, training, the structural
//! surrogate and the lowest-magnitude pruning baseline.

mod dataset;
mod magnitude;
mod network;
mod surrogate;

use std::fmt::Write as _;

pub use dataset::{make_dataset, Dataset, DatasetConfig, Split};
pub use magnitude::magnitude_prune;
pub use network::{evaluate_net, train_eval, TinyNet, TrainConfig};
pub use surrogate::{surrogate_accuracy, surrogate_eval, SurrogateEvaluator, SURROGATE_CEILING};

use crate::error::Result;
use crate::fmt::sig9;
use crate::graph::Dag;

/// Score of one evaluated architecture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub flops: f64,
    pub weights_total: usize,
    pub weights_remaining: usize,
    pub seconds: f64,
}

impl EvalReport {
    /// CSV `accuracy,flops,weights_total,weights_remaining,seconds`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("accuracy,flops,weights_total,weights_remaining,seconds\n");
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            self.accuracy,
            sig9(self.flops),
            self.weights_total,
            self.weights_remaining,
            sig9(self.seconds)
        );
        out
    }
}

/// Scores a pruned DAG.
pub trait Evaluator: Sync {
    fn evaluate(&self, dag: &Dag) -> Result<EvalReport>;
}

/// Builds a [`TinyNet`] on the DAG, trains it and reports test accuracy.
#[derive(Debug, Clone)]
pub struct TrainingEvaluator {
    pub data: Dataset,
    pub width: usize,
    pub net_seed: u64,
    pub train: TrainConfig,
}

impl TrainingEvaluator {
    pub fn new(data: Dataset, width: usize, net_seed: u64) -> Self {
        Self { data, width, net_seed, train: TrainConfig { seed: net_seed, ..Default::default() } }
    }

    pub fn build(&self, dag: &Dag) -> Result<TinyNet> {
        TinyNet::new(dag, self.width, self.data.input_dim(), self.data.classes(), self.net_seed)
    }
}

impl Evaluator for TrainingEvaluator {
    fn evaluate(&self, dag: &Dag) -> Result<EvalReport> {
        let mut net = self.build(dag)?;
        train_eval(&mut net, &self.data, &self.train)
    }
}
