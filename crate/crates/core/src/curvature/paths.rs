use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::graph::Graph;

/// Shortest-path distances from a set of source nodes. Edge direction is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    node_count: usize,
    rows: Vec<Option<Vec<f64>>>,
}

impl DistanceTable {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// `d(a, b)`, looking up whichever endpoint was a source. Infinite when
    /// unreachable; panics if neither endpoint was a source.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        match (&self.rows[a], &self.rows[b]) {
            (Some(row), _) => row[b],
            (None, Some(row)) => row[a],
            (None, None) => panic!("neither {a} nor {b} is a source of this distance table"),
        }
    }

    pub fn row(&self, source: usize) -> Option<&[f64]> {
        self.rows[source].as_deref()
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::from([Entry(0.0, source)]);
    while let Some(Entry(d, x)) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &(y, w) in &adj[x] {
            let nd = d + w;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Entry(nd, y));
            }
        }
    }
    dist
}

/// Exact single-source shortest paths (Dijkstra) from every node in `sources`,
/// treating every edge as undirected with its current weight.
pub fn shortest_paths(g: &Graph, sources: &[usize]) -> DistanceTable {
    let n = g.node_count();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push((e.v, e.w));
        adj[e.v].push((e.u, e.w));
    }
    let mut rows = vec![None; n];
    let computed: Vec<(usize, Vec<f64>)> =
        sources.par_iter().map(|&s| (s, dijkstra(&adj, s))).collect();
    for (s, row) in computed {
        rows[s] = Some(row);
    }
    DistanceTable { node_count: n, rows }
}

pub fn all_pairs(g: &Graph) -> DistanceTable {
    let sources: Vec<usize> = (0..g.node_count()).collect();
    shortest_paths(g, &sources)
}
