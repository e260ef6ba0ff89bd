//! Node mass distributions, graph distances, exact optimal transport and
//! Ollivier-Ricci curvature.

mod mass;
mod paths;
mod ricci;
mod transport;

pub use mass::{mass_distribution, MassContext, MassDistribution, MassParams};
pub use paths::{all_pairs, shortest_paths, DistanceTable};
pub use ricci::{curvature_map, ollivier_ricci, CurvatureMap, EdgeCurvature};
pub use transport::{transport_cost, wasserstein};
