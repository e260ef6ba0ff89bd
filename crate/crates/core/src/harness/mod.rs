//! Configuration, stage commands, experiments and the command-line front end.
//!
//! Stages exchange plain files in the output directory, so a run can be resumed
//! stage by stage: `generate` writes the graph and DAG, `flow` the final weights,
//! `prune` the pruned DAG and `eval` the score.

mod cli;
mod commands;
mod config;
mod table;

pub use cli::{execute, run, Cli, Command, EXIT_CONFIG, EXIT_OK, EXIT_PIPELINE};
pub use commands::{
    build_dag, cmd_compare, cmd_eval, cmd_flow, cmd_generate, cmd_prune, cmd_search, cmd_transfer, files, mu_sweep,
    read_best_state, reward_csv, transfer_grid, weights_fraction, EvalOutcome, FlowMeta,
};
pub use config::{EvaluatorKind, RunConfig, MU_RANGE_MAX};
pub use table::{ExperimentTable, TableRow};
