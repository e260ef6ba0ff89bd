use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pruning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {0} has no neighbors but alpha < 1")]
    DegenerateNode(usize),

    #[error("transport infeasible: no finite path between {0} and {1}")]
    TransportInfeasible(usize, usize),

    #[error("zero distance between adjacent nodes {0} and {1}")]
    ZeroDistance(usize, usize),

    #[error("ricci flow degenerated: every weight collapsed to the floor at iteration {0}")]
    DegenerateFlow(usize),

    #[error("pruning disconnected the input from the output")]
    EmptyNetwork,

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("config: {0}")]
    Config(String),

    #[error("missing stage input {path}: run `{stage}` first")]
    StageOrder { path: PathBuf, stage: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
