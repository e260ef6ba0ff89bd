//! Exact discrete optimal transport between two small measures.
//!
//! The transportation problem is solved as a min-cost flow with successive
//! shortest augmenting paths (Bellman-Ford on the bipartite residual graph).
//! Supports here are a node plus its neighbors, so a dense solver is plenty.

use super::mass::MassDistribution;
use super::paths::DistanceTable;
use crate::error::{Error, Result};

const MASS_EPS: f64 = 1e-14;
const RELAX_EPS: f64 = 1e-12;

/// Minimum of `sum T[i][j] * cost[i][j]` over couplings `T >= 0` with row sums
/// `supply` and column sums `demand`. All costs must be finite.
pub fn transport_cost(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let (p, q) = (supply.len(), demand.len());
    let mut supply_left = supply.to_vec();
    let mut demand_left = demand.to_vec();
    let mut flow = vec![vec![0.0; q]; p];

    // residual nodes: 0..p supply, p..p+q demand
    let total = p + q;
    loop {
        let mut dist = vec![f64::INFINITY; total];
        let mut pred = vec![usize::MAX; total];
        for i in 0..p {
            if supply_left[i] > MASS_EPS {
                dist[i] = 0.0;
            }
        }
        for _ in 0..total {
            let mut changed = false;
            for i in 0..p {
                if dist[i].is_finite() {
                    for j in 0..q {
                        let nd = dist[i] + cost[i][j];
                        if nd < dist[p + j] - RELAX_EPS {
                            dist[p + j] = nd;
                            pred[p + j] = i;
                            changed = true;
                        }
                    }
                }
            }
            for j in 0..q {
                if dist[p + j].is_finite() {
                    for i in 0..p {
                        if flow[i][j] > MASS_EPS {
                            let nd = dist[p + j] - cost[i][j];
                            if nd < dist[i] - RELAX_EPS {
                                dist[i] = nd;
                                pred[i] = p + j;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let Some(sink) = (0..q)
            .filter(|&j| demand_left[j] > MASS_EPS && dist[p + j].is_finite())
            .min_by(|&a, &b| dist[p + a].total_cmp(&dist[p + b]))
        else {
            break;
        };

        // walk back to the originating supply node, collecting the bottleneck
        let mut path = Vec::new();
        let mut node = p + sink;
        let mut bottleneck = demand_left[sink];
        while node >= p || pred[node] != usize::MAX {
            let prev = pred[node];
            if node >= p {
                path.push((prev, node - p, true));
            } else {
                let j = prev - p;
                bottleneck = bottleneck.min(flow[node][j]);
                path.push((node, j, false));
            }
            node = prev;
            if path.len() > total {
                break;
            }
        }
        bottleneck = bottleneck.min(supply_left[node]);
        if bottleneck <= MASS_EPS {
            break;
        }
        for &(i, j, forward) in &path {
            if forward {
                flow[i][j] += bottleneck;
            } else {
                flow[i][j] -= bottleneck;
            }
        }
        supply_left[node] -= bottleneck;
        demand_left[sink] -= bottleneck;
    }

    flow.iter()
        .zip(cost)
        .flat_map(|(frow, crow)| frow.iter().zip(crow).map(|(f, c)| f * c))
        .sum()
}

/// Wasserstein-1 distance between two measures under graph distances `dist`.
pub fn wasserstein(dist: &DistanceTable, mx: &MassDistribution, my: &MassDistribution) -> Result<f64> {
    let xs: Vec<(usize, f64)> = mx.support.iter().copied().filter(|&(_, m)| m > 0.0).collect();
    let ys: Vec<(usize, f64)> = my.support.iter().copied().filter(|&(_, m)| m > 0.0).collect();
    let mut cost = Vec::with_capacity(xs.len());
    for &(a, _) in &xs {
        let mut row = Vec::with_capacity(ys.len());
        for &(b, _) in &ys {
            let d = dist.get(a, b);
            if !d.is_finite() {
                return Err(Error::TransportInfeasible(a, b));
            }
            row.push(d);
        }
        cost.push(row);
    }
    let supply: Vec<f64> = xs.iter().map(|&(_, m)| m).collect();
    let demand: Vec<f64> = ys.iter().map(|&(_, m)| m).collect();
    Ok(transport_cost(&supply, &demand, &cost))
}
