//! Discrete Ricci flow on edge weights, mean-threshold pruning and the FLOPs
//! cost model.

mod flops;
mod prune;
mod state;

pub use flops::{flops_estimate, CostModel};
pub use prune::{prune, PruneResult};
pub use state::{flow_step, flow_step_with, run_flow, run_flow_on, FlowConfig, FlowState, TraceRow, WEIGHT_FLOOR};
