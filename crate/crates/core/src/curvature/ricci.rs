use std::fmt::Write as _;

use rayon::prelude::*;

use super::mass::{MassContext, MassDistribution, MassParams};
use super::paths::{all_pairs, DistanceTable};
use super::transport::wasserstein;
use crate::error::{Error, Result};
use crate::fmt::sig9;
use crate::graph::Graph;

/// Ollivier-Ricci curvature `1 - W(m_x, m_y) / d(x, y)` of the pair `(x, y)`.
pub fn ollivier_ricci(
    ctx: &MassContext,
    dist: &DistanceTable,
    x: usize,
    y: usize,
    p: &MassParams,
) -> Result<f64> {
    let mx = ctx.distribution(x, p)?;
    let my = ctx.distribution(y, p)?;
    Ok(curvature_between(dist, &mx, &my)?.kappa)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCurvature {
    pub kappa: f64,
    pub wasserstein: f64,
    pub distance: f64,
}

fn curvature_between(dist: &DistanceTable, mx: &MassDistribution, my: &MassDistribution) -> Result<EdgeCurvature> {
    let (x, y) = (mx.center, my.center);
    let distance = dist.get(x, y);
    if distance <= 0.0 {
        return Err(Error::ZeroDistance(x, y));
    }
    if !distance.is_finite() {
        return Err(Error::TransportInfeasible(x, y));
    }
    let w = wasserstein(dist, mx, my)?;
    Ok(EdgeCurvature { kappa: 1.0 - w / distance, wasserstein: w, distance })
}

/// Curvature of every edge of a graph, in edge order, plus the distance table
/// it was computed against.
#[derive(Debug, Clone)]
pub struct CurvatureMap {
    pub edges: Vec<(usize, usize)>,
    pub values: Vec<EdgeCurvature>,
    pub distances: DistanceTable,
}

impl CurvatureMap {
    pub fn kappas(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.kappa).collect()
    }

    /// CSV `u,v,kappa,wasserstein,distance`, 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,kappa,wasserstein,distance\n");
        for (&(u, v), c) in self.edges.iter().zip(&self.values) {
            let _ = writeln!(out, "{u},{v},{},{},{}", sig9(c.kappa), sig9(c.wasserstein), sig9(c.distance));
        }
        out
    }
}

/// Computes the distance table once, builds every node's mass distribution, then
/// evaluates each edge's curvature in parallel against that snapshot.
pub fn curvature_map(g: &Graph, ctx: &MassContext, p: &MassParams) -> Result<CurvatureMap> {
    let distances = all_pairs(g);
    let masses = (0..g.node_count())
        .map(|x| ctx.distribution(x, p))
        .collect::<Result<Vec<_>>>()?;
    let values = g
        .edges()
        .par_iter()
        .map(|e| curvature_between(&distances, &masses[e.u], &masses[e.v]))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurvatureMap {
        edges: g.edges().iter().map(|e| (e.u, e.v)).collect(),
        values,
        distances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{to_dag, ws_generate, Edge, WsParams};

    #[test]
    fn dirac_masses_have_zero_curvature() {
        let dag = to_dag(&ws_generate(&WsParams::new(16, 4, 0.75, 2)).unwrap()).unwrap();
        let ctx = MassContext::from_dag(&dag);
        let p = MassParams::new(1.0, 0.4, 0.4).unwrap();
        let map = curvature_map(dag.graph(), &ctx, &p).unwrap();
        assert!(map.kappas().iter().all(|&k| k == 0.0));
    }

    #[test]
    fn equal_measures_have_unit_curvature() {
        let d = all_pairs(&Graph::new(2, false, vec![Edge::new(0, 1, 1.0)]).unwrap());
        let mx = MassDistribution { center: 0, support: vec![(0, 0.5), (1, 0.5)] };
        let my = MassDistribution { center: 1, support: vec![(1, 0.5), (0, 0.5)] };
        assert_eq!(curvature_between(&d, &mx, &my).unwrap().kappa, 1.0);
    }

    #[test]
    fn zero_distance_is_rejected() {
        let g = Graph::new(2, false, vec![Edge::new(0, 1, 0.0)]).unwrap();
        let ctx = MassContext::from_graph(&g);
        let r = ollivier_ricci(&ctx, &all_pairs(&g), 0, 1, &MassParams::new(0.5, 1.0, 0.0).unwrap());
        assert!(matches!(r, Err(Error::ZeroDistance(0, 1))));
    }

    #[test]
    fn csv_dump() {
        let g = Graph::new(3, false, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)]).unwrap();
        let ctx = MassContext::from_graph(&g);
        let map = curvature_map(&g, &ctx, &MassParams::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(map.to_csv(), "u,v,kappa,wasserstein,distance\n0,1,0,1,1\n1,2,0,1,1\n");
    }
}
