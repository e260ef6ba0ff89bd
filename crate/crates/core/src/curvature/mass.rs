use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dag, Graph};

/// Hyperparameters of the node mass distribution.
///
/// `alpha` is the mass kept on the node itself; `beta`, `gamma` and `delta` weight
/// the inverse-degree, input-degree and output/input-ratio terms. Only `alpha`,
/// `beta` and `delta` are free: `gamma = 1 - beta - delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl MassParams {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            gamma: (1.0 - beta - delta).max(0.0),
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { alpha, beta, gamma, delta } = *self;
        if ![alpha, beta, gamma, delta].iter().all(|v| v.is_finite()) {
            return Err(Error::Param("mass parameters must be finite".into()));
        }
        let unit = 0.0..=1.0;
        if !unit.contains(&alpha) || !unit.contains(&beta) || !unit.contains(&delta) {
            return Err(Error::Param(format!(
                "alpha, beta, delta must lie in [0, 1], got ({alpha}, {beta}, {delta})"
            )));
        }
        // grid values like 0.7 + 0.3 overshoot 1 by an ulp
        if beta + delta > 1.0 + 1e-9 {
            return Err(Error::Param(format!("beta + delta must be <= 1, got {}", beta + delta)));
        }
        if (gamma - (1.0 - beta - delta).max(0.0)).abs() > 1e-12 {
            return Err(Error::Param("gamma must equal 1 - beta - delta".into()));
        }
        Ok(())
    }
}

impl Default for MassParams {
    /// Search-free setting for the compression experiments: the point of the
    /// 0.1 grid that keeps the most WS(32, 4, 0.75) seeds within [0.5, 0.95] of
    /// baseline FLOPs.
    fn default() -> Self {
        Self::new(0.5, 0.1, 0.0).expect("valid defaults")
    }
}

/// Probability measure centred on one node, supported on the node and its
/// immediate neighbors. The centre comes first in `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassDistribution {
    pub center: usize,
    pub support: Vec<(usize, f64)>,
}

impl MassDistribution {
    pub fn dirac(center: usize) -> Self {
        Self { center, support: vec![(center, 1.0)] }
    }

    pub fn total(&self) -> f64 {
        self.support.iter().map(|(_, m)| m).sum()
    }
}

/// Neighborhoods and degree statistics the mass distribution reads.
///
/// Neighborhoods ignore edge direction; `Input`/`Output` are in/out-degrees of the
/// directed graph. For an undirected graph both equal the total degree.
#[derive(Debug, Clone)]
pub struct MassContext {
    neighbors: Vec<Vec<usize>>,
    degree: Vec<usize>,
    input: Vec<usize>,
    output: Vec<usize>,
}

impl MassContext {
    pub fn from_dag(dag: &Dag) -> Self {
        Self::from_graph(dag.graph())
    }

    pub fn from_graph(g: &Graph) -> Self {
        let neighbors = g
            .adjacency()
            .into_iter()
            .map(|nbrs| nbrs.into_iter().map(|(y, _)| y).collect())
            .collect();
        let degree = g.degrees();
        let (input, output) = if g.is_directed() {
            (g.in_degrees(), g.out_degrees())
        } else {
            (degree.clone(), degree.clone())
        };
        Self { neighbors, degree, input, output }
    }

    pub fn node_count(&self) -> usize {
        self.degree.len()
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    /// Unnormalised neighbor score `beta / Deg(y) + gamma * Input(y) +
    /// delta * Output(y) / max(Input(y), 1)`.
    pub fn score(&self, y: usize, p: &MassParams) -> f64 {
        let deg = self.degree[y].max(1) as f64;
        let input = self.input[y] as f64;
        let output = self.output[y] as f64;
        p.beta / deg + p.gamma * input + p.delta * output / input.max(1.0)
    }

    /// Mass `alpha` on `x`; the remaining `1 - alpha` split across the neighbors of
    /// `x` in proportion to their scores. All-zero scores fall back to a uniform split.
    pub fn distribution(&self, x: usize, p: &MassParams) -> Result<MassDistribution> {
        if x >= self.node_count() {
            return Err(Error::Param(format!("node {x} out of range")));
        }
        let nbrs = &self.neighbors[x];
        if nbrs.is_empty() {
            if p.alpha < 1.0 {
                log::warn!("node {x} has no neighbors; all mass stays on it");
                return Err(Error::DegenerateNode(x));
            }
            return Ok(MassDistribution::dirac(x));
        }
        let scores: Vec<f64> = nbrs.iter().map(|&y| self.score(y, p)).collect();
        let total: f64 = scores.iter().sum();
        let spread = 1.0 - p.alpha;
        let mut support = Vec::with_capacity(nbrs.len() + 1);
        support.push((x, p.alpha));
        if total > 0.0 {
            support.extend(nbrs.iter().zip(&scores).map(|(&y, &s)| (y, spread * s / total)));
        } else {
            let share = spread / nbrs.len() as f64;
            support.extend(nbrs.iter().map(|&y| (y, share)));
        }
        Ok(MassDistribution { center: x, support })
    }
}

/// Mass distribution of node `x` with degree statistics taken from the DAG.
pub fn mass_distribution(dag: &Dag, x: usize, p: &MassParams) -> Result<MassDistribution> {
    MassContext::from_dag(dag).distribution(x, p)
}
