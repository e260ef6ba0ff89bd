//! Curvature-guided pruning of randomly wired networks.
//!
//! A Watts-Strogatz graph is oriented into a computational DAG, its edge weights
//! are evolved by discrete Ricci flow over Ollivier-Ricci curvature, and edges
//! whose final weight exceeds the mean are cut before the graph is mapped to a
//! network. A REINFORCE controller searches the mass-distribution
//! hyperparameters against an accuracy-minus-FLOPs reward.

pub mod controller;
pub mod curvature;
pub mod error;
pub mod eval;
pub mod flow;
pub mod fmt;
pub mod graph;
pub mod harness;

pub use error::{Error, Result};
