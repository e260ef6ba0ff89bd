use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Edge, Graph};
use crate::error::{Error, Result};

/// Watts-Strogatz parameters: `n` nodes on a ring, each joined to its `k / 2`
/// neighbors on either side, each lattice edge rewired with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WsParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
}

impl WsParams {
    pub fn new(n: usize, k: usize, p: f64, seed: u64) -> Self {
        Self { n, k, p, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k % 2 != 0 {
            return Err(Error::Param(format!("k must be even and positive, got {}", self.k)));
        }
        if self.k >= self.n {
            return Err(Error::Param(format!("k must be < n, got k={} n={}", self.k, self.n)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Param(format!("p must lie in [0, 1], got {}", self.p)));
        }
        Ok(())
    }
}

impl Default for WsParams {
    fn default() -> Self {
        Self::new(32, 4, 0.75, 0)
    }
}

/// Generates an undirected Watts-Strogatz graph with unit weights.
///
/// The ring lattice joins every node `v` to `v + 1 ..= v + k/2` (mod `n`). Then for
/// `i = 1..=k/2` and every node `v` in clockwise order, the edge `v - (v+i)` is
/// rewired with probability `p` to `v - w`, `w` drawn uniformly until it is neither
/// `v` nor an existing neighbor of `v`.
///
/// RNG stream (ChaCha8 seeded with `seed`): one `f64` draw per rewiring decision,
/// then one `usize` draw per target candidate. A node already adjacent to every
/// other node keeps its edge and draws no candidates.
pub fn ws_generate(params: &WsParams) -> Result<Graph> {
    params.validate()?;
    let WsParams { n, k, p, seed } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for v in 0..n {
        for j in 1..=k / 2 {
            let u = (v + j) % n;
            adj[v].insert(u);
            adj[u].insert(v);
        }
    }

    for i in 1..=k / 2 {
        for v in 0..n {
            let target = (v + i) % n;
            let rewire = rng.random::<f64>() < p;
            if !rewire || !adj[v].contains(&target) || adj[v].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != v && !adj[v].contains(&w) {
                    break w;
                }
            };
            adj[v].remove(&target);
            adj[target].remove(&v);
            adj[v].insert(w);
            adj[w].insert(v);
        }
    }

    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |&v| Edge::new(u, v, 1.0)))
        .collect();
    Graph::new(n, false, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_lattice_without_rewiring() {
        for seed in [0, 1, 99] {
            let g = ws_generate(&WsParams::new(8, 2, 0.0, seed)).unwrap();
            assert_eq!(g.edge_count(), 8);
            assert!(g.degrees().iter().all(|&d| d == 2));
            let g = ws_generate(&WsParams::new(8, 4, 0.0, seed)).unwrap();
            assert_eq!(g.edge_count(), 16);
            assert!(g.degrees().iter().all(|&d| d == 4));
        }
        assert_eq!(
            ws_generate(&WsParams::new(10, 4, 0.0, 1)).unwrap(),
            ws_generate(&WsParams::new(10, 4, 0.0, 2)).unwrap()
        );
    }

    #[test]
    fn invalid_parameters() {
        assert!(ws_generate(&WsParams::new(8, 3, 0.5, 0)).is_err());
        assert!(ws_generate(&WsParams::new(8, 8, 0.5, 0)).is_err());
        assert!(ws_generate(&WsParams::new(8, 0, 0.5, 0)).is_err());
        assert!(ws_generate(&WsParams::new(8, 2, 1.5, 0)).is_err());
    }

    #[test]
    fn seeds_matter_when_rewiring() {
        let base = ws_generate(&WsParams::new(32, 4, 0.75, 0)).unwrap();
        assert_eq!(base, ws_generate(&WsParams::new(32, 4, 0.75, 0)).unwrap());
        let differs = (1..=10).any(|s| ws_generate(&WsParams::new(32, 4, 0.75, s)).unwrap() != base);
        assert!(differs);
    }

    #[test]
    fn dense_rewiring_terminates() {
        // k = n - 2 leaves one free slot per node at most
        let g = ws_generate(&WsParams::new(6, 4, 1.0, 3)).unwrap();
        assert_eq!(g.edge_count(), 12);
    }
}
