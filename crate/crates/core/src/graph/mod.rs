//! Weighted graphs, the Watts-Strogatz generator, label-order DAG orientation and
//! the edge-list / DOT file formats.

mod dag;
mod io;
mod ws;

pub use dag::{to_dag, Dag};
pub use io::{parse_graph, read_graph, render_dot, render_graph, write_dot, write_graph};
pub use ws::{ws_generate, WsParams};

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A weighted edge. Undirected edges are stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: f64) -> Self {
        Self { u, v, w }
    }
}

/// Simple weighted graph on nodes `0..node_count`.
///
/// Edges are kept sorted by `(u, v)`; no self-loops, no duplicates, all weights finite
/// and non-negative. Values are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    directed: bool,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(node_count: usize, directed: bool, edges: Vec<Edge>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        let mut edges = edges;
        for e in edges.iter_mut() {
            if e.u >= node_count || e.v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} references a node outside 0..{node_count}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("self-loop on node {}", e.u)));
            }
            if !e.w.is_finite() || e.w < 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} has invalid weight {}",
                    e.u, e.v, e.w
                )));
            }
            if !directed && e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
        }
        edges.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = edges.windows(2).find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v)) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {}-{}",
                pair[0].u, pair[0].v
            )));
        }
        Ok(Self {
            node_count,
            directed,
            edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.w).collect()
    }

    /// Index of the edge `u-v` (or `u->v` when directed).
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = if !self.directed && u > v { (v, u) } else { (u, v) };
        self.edges.binary_search_by_key(&(a, b), |e| (e.u, e.v)).ok()
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.find_edge(u, v).is_some()
    }

    /// Same topology with new weights, one per edge in edge order.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Param(format!(
                "expected {} weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| Edge::new(e.u, e.v, w))
            .collect();
        Self::new(self.node_count, self.directed, edges)
    }

    /// Undirected adjacency: for each node, `(neighbor, edge index)` in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    /// Total degree of every node (edge direction ignored).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for e in &self.edges {
            deg[e.v] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for e in &self.edges {
            deg[e.u] += 1;
        }
        deg
    }

    /// Weakly connected component id per node, ids assigned in order of lowest member.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.node_count];
        let mut next = 0;
        for start in 0..self.node_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Subgraph induced by the largest weakly connected component, relabelled in
    /// increasing order of the original ids. Returns the subgraph and the original id
    /// of every new node. Ties go to the component containing the lowest id.
    pub fn largest_component(&self) -> (Graph, Vec<usize>) {
        let comp = self.components();
        let count = comp.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let best = (0..count)
            .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
            .unwrap_or(0);
        let keep: Vec<bool> = comp.iter().map(|&c| c == best).collect();
        self.induced(&keep)
    }

    /// Subgraph induced by the nodes flagged in `keep`, relabelled in increasing order.
    pub(crate) fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.node_count];
        let mut origin = Vec::new();
        for (x, &k) in keep.iter().enumerate() {
            if k {
                new_id[x] = origin.len();
                origin.push(x);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.u] && keep[e.v])
            .map(|e| Edge::new(new_id[e.u], new_id[e.v], e.w))
            .collect();
        let g = Graph::new(origin.len().max(1), self.directed, edges)
            .expect("induced subgraph of a valid graph is valid");
        (g, origin)
    }
}
