use std::fmt::Write as _;

use crate::curvature::{curvature_map, MassContext, MassParams};
use crate::error::{Error, Result};
use crate::fmt::sig9;
use crate::graph::{Dag, Graph};

/// Smallest weight an edge may carry; keeps every graph distance positive.
pub const WEIGHT_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { max_iter: 50, tol: 1e-4 }
    }
}

/// Statistics of one flow iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub max_delta: f64,
    pub sum_w: f64,
    pub min_w: f64,
    pub max_w: f64,
}

/// Edge weights after `iteration` steps of Ricci flow, with the curvature that
/// produced them and the per-iteration trace.
#[derive(Debug, Clone)]
pub struct FlowState {
    graph: Graph,
    iteration: usize,
    total_weight: f64,
    converged: bool,
    curvature: Vec<f64>,
    trace: Vec<TraceRow>,
}

impl FlowState {
    /// Unit weight on every edge of `g`.
    pub fn new(g: &Graph) -> Result<Self> {
        let graph = g.with_weights(&vec![1.0; g.edge_count()])?;
        Ok(Self {
            total_weight: g.edge_count() as f64,
            graph,
            iteration: 0,
            converged: false,
            curvature: Vec::new(),
            trace: Vec::new(),
        })
    }

    /// Rebuilds a finished state from stored weights (used when pipeline stages
    /// are run from files).
    pub fn from_weights(g: &Graph, iteration: usize, converged: bool) -> Self {
        Self {
            total_weight: g.weights().iter().sum(),
            graph: g.clone(),
            iteration,
            converged,
            curvature: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weights(&self) -> Vec<f64> {
        self.graph.weights()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Sum of the initial weights, preserved by every step.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Curvature computed in the most recent step (empty before the first).
    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    pub fn trace(&self) -> &[TraceRow] {
        &self.trace
    }

    pub fn max_delta(&self) -> Option<f64> {
        self.trace.last().map(|r| r.max_delta)
    }

    /// CSV `k,max_delta,sum_w,min_w,max_w`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("k,max_delta,sum_w,min_w,max_w\n");
        for r in &self.trace {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.k,
                sig9(r.max_delta),
                sig9(r.sum_w),
                sig9(r.min_w),
                sig9(r.max_w)
            );
        }
        out
    }
}

/// Rescales `raw` so it sums to `target`, pinning anything that would fall under
/// the floor to the floor and rescaling the rest. `None` if nothing is left above it.
fn normalize(raw: &[f64], target: f64) -> Option<Vec<f64>> {
    let mut pinned = vec![false; raw.len()];
    loop {
        let free: f64 = raw.iter().zip(&pinned).filter(|(_, p)| !**p).map(|(w, _)| w).sum();
        let pinned_mass = pinned.iter().filter(|p| **p).count() as f64 * WEIGHT_FLOOR;
        let scale = (target - pinned_mass) / free;
        if free <= 0.0 || !scale.is_finite() || scale <= 0.0 {
            return None;
        }
        let mut changed = false;
        for (w, p) in raw.iter().zip(pinned.iter_mut()) {
            if !*p && w * scale < WEIGHT_FLOOR {
                *p = true;
                changed = true;
            }
        }
        if !changed {
            return Some(
                raw.iter()
                    .zip(&pinned)
                    .map(|(w, p)| if *p { WEIGHT_FLOOR } else { w * scale })
                    .collect(),
            );
        }
    }
}

/// One discrete Ricci-flow step: `w_ij <- (1 - kappa_ij) * d(i, j)` with `d` the
/// current shortest-path distance, followed by a single global rescale back to
/// the initial weight sum.
pub fn flow_step_with(state: &FlowState, ctx: &MassContext, p: &MassParams) -> Result<FlowState> {
    let k = state.iteration + 1;
    let map = curvature_map(&state.graph, ctx, p)?;
    let raw: Vec<f64> = map
        .values
        .iter()
        .map(|c| ((1.0 - c.kappa) * c.distance).max(0.0))
        .collect();
    let next = normalize(&raw, state.total_weight).ok_or(Error::DegenerateFlow(k))?;
    if next.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite(format!("flow weights at iteration {k}")));
    }
    let old = state.graph.weights();
    let max_delta = old.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let row = TraceRow {
        k,
        max_delta,
        sum_w: next.iter().sum(),
        min_w: next.iter().copied().fold(f64::INFINITY, f64::min),
        max_w: next.iter().copied().fold(0.0, f64::max),
    };
    let mut trace = state.trace.clone();
    trace.push(row);
    Ok(FlowState {
        graph: state.graph.with_weights(&next)?,
        iteration: k,
        total_weight: state.total_weight,
        converged: false,
        curvature: map.kappas(),
        trace,
    })
}

/// [`flow_step_with`] using the degree statistics of `state`'s own graph.
pub fn flow_step(state: &FlowState, p: &MassParams) -> Result<FlowState> {
    flow_step_with(state, &MassContext::from_graph(&state.graph), p)
}

/// Runs the flow on an arbitrary graph from unit weights until the largest weight
/// change drops under `cfg.tol` or `cfg.max_iter` steps have run.
pub fn run_flow_on(g: &Graph, ctx: &MassContext, p: &MassParams, cfg: &FlowConfig) -> Result<FlowState> {
    let mut state = FlowState::new(g)?;
    while state.iteration < cfg.max_iter {
        state = flow_step_with(&state, ctx, p)?;
        if state.max_delta().is_some_and(|d| d < cfg.tol) {
            state.converged = true;
            break;
        }
    }
    Ok(state)
}

/// Ricci flow over the DAG's edges (distances undirected, degree statistics from
/// the orientation).
pub fn run_flow(dag: &Dag, p: &MassParams, cfg: &FlowConfig) -> Result<FlowState> {
    run_flow_on(dag.graph(), &MassContext::from_dag(dag), p, cfg)
}
