use std::collections::VecDeque;

use super::{Edge, Graph};
use crate::error::{Error, Result};

/// A label-ordered computational DAG with one virtual input and one virtual output.
///
/// Interior nodes keep the ids of the graph they came from. The virtual input is
/// always node `n - 2` and the virtual output node `n - 1`, so a directed edge-list
/// file with that layout round-trips through [`Dag::from_graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dag {
    base: Graph,
    input_node: usize,
    output_node: usize,
}

/// Orients every edge of a connected undirected graph from lower to higher label,
/// then attaches a virtual input to every in-degree-0 node and a virtual output to
/// every out-degree-0 node. Virtual edges have weight 1.
pub fn to_dag(g: &Graph) -> Result<Dag> {
    let components = g.components().iter().max().map_or(0, |m| m + 1);
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let n = g.node_count();
    let (input, output) = (n, n + 1);
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge::new(e.u.min(e.v), e.u.max(e.v), e.w))
        .collect();
    let (mut indeg, mut outdeg) = (vec![0usize; n], vec![0usize; n]);
    for e in &edges {
        outdeg[e.u] += 1;
        indeg[e.v] += 1;
    }
    for x in 0..n {
        if indeg[x] == 0 {
            edges.push(Edge::new(input, x, 1.0));
        }
        if outdeg[x] == 0 {
            edges.push(Edge::new(x, output, 1.0));
        }
    }
    Dag::from_graph(Graph::new(n + 2, true, edges)?)
}

impl Dag {
    /// Wraps a directed graph laid out as `[interior..., input, output]`, checking
    /// every DAG invariant.
    pub fn from_graph(base: Graph) -> Result<Self> {
        let n = base.node_count();
        if !base.is_directed() || n < 3 {
            return Err(Error::InvalidGraph(
                "a DAG needs a directed graph with at least one interior node".into(),
            ));
        }
        let dag = Self {
            base,
            input_node: n - 2,
            output_node: n - 1,
        };
        dag.validate()?;
        Ok(dag)
    }

    pub fn validate(&self) -> Result<()> {
        let (input, output) = (self.input_node, self.output_node);
        let indeg = self.base.in_degrees();
        let outdeg = self.base.out_degrees();
        for e in self.base.edges() {
            if e.v == input || e.u == output {
                return Err(Error::InvalidGraph(format!("edge {}->{} enters input or leaves output", e.u, e.v)));
            }
            if e.u == input && e.v == output {
                return Err(Error::InvalidGraph("input wired straight to output".into()));
            }
            if e.u != input && e.v != output && e.u >= e.v {
                return Err(Error::InvalidGraph(format!("interior edge {}->{} is not label-ordered", e.u, e.v)));
            }
        }
        for x in self.interior_nodes() {
            if indeg[x] == 0 || outdeg[x] == 0 {
                return Err(Error::InvalidGraph(format!("interior node {x} is a source or sink")));
            }
        }
        if self.topological_order().is_none() {
            return Err(Error::InvalidGraph("graph has a cycle".into()));
        }
        let fwd = self.reachable(input, true);
        let bwd = self.reachable(output, false);
        if let Some(x) = self.interior_nodes().find(|&x| !fwd[x] || !bwd[x]) {
            return Err(Error::InvalidGraph(format!("node {x} is not on an input-output path")));
        }
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.base
    }

    pub fn into_graph(self) -> Graph {
        self.base
    }

    pub fn input_node(&self) -> usize {
        self.input_node
    }

    pub fn output_node(&self) -> usize {
        self.output_node
    }

    pub fn node_count(&self) -> usize {
        self.base.node_count()
    }

    pub fn interior_count(&self) -> usize {
        self.base.node_count() - 2
    }

    pub fn interior_nodes(&self) -> std::ops::Range<usize> {
        0..self.base.node_count() - 2
    }

    pub fn edges(&self) -> &[Edge] {
        self.base.edges()
    }

    /// True for edges touching the virtual input or output node.
    pub fn is_virtual(&self, e: &Edge) -> bool {
        e.u == self.input_node || e.v == self.output_node
    }

    pub fn interior_edge_count(&self) -> usize {
        self.edges().iter().filter(|e| !self.is_virtual(e)).count()
    }

    /// Same topology with new edge weights.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        Ok(Self {
            base: self.base.with_weights(weights)?,
            ..*self
        })
    }

    /// Kahn's algorithm; `None` when the graph has a cycle. Ties resolve to the
    /// lowest id, so the order is input, interior ascending, output.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.base.node_count();
        let mut indeg = self.base.in_degrees();
        let succ = self.successors();
        let mut ready = std::collections::BTreeSet::new();
        ready.extend((0..n).filter(|&x| indeg[x] == 0));
        let mut order = Vec::with_capacity(n);
        while let Some(x) = ready.pop_first() {
            order.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        // label order puts the input after the interior; move it to the front
        (order.len() == n).then(|| {
            let mut order = order;
            if let Some(pos) = order.iter().position(|&x| x == self.input_node) {
                order.remove(pos);
                order.insert(0, self.input_node);
            }
            order
        })
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.base.node_count()];
        for e in self.base.edges() {
            succ[e.u].push(e.v);
        }
        succ
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.base.node_count()];
        for e in self.base.edges() {
            pred[e.v].push(e.u);
        }
        pred
    }

    fn reachable(&self, from: usize, forward: bool) -> Vec<bool> {
        let next = if forward { self.successors() } else { self.predecessors() };
        let mut seen = vec![false; self.base.node_count()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &y in &next[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Keeps only the edges flagged in `keep_edge`, then drops every interior node
    /// that has lost its path from the input or to the output, repeating until no
    /// node changes. Surviving nodes are relabelled in increasing order.
    pub fn retain_edges(&self, keep_edge: &[bool]) -> Result<(Dag, usize)> {
        let n = self.base.node_count();
        let mut alive = vec![true; n];
        let mut edge_alive: Vec<bool> = keep_edge.to_vec();
        loop {
            let mut succ = vec![Vec::new(); n];
            let mut pred = vec![Vec::new(); n];
            for (i, e) in self.base.edges().iter().enumerate() {
                if edge_alive[i] {
                    succ[e.u].push(e.v);
                    pred[e.v].push(e.u);
                }
            }
            let fwd = flood(&succ, self.input_node);
            let bwd = flood(&pred, self.output_node);
            if !fwd[self.output_node] {
                return Err(Error::EmptyNetwork);
            }
            let mut changed = false;
            for x in self.interior_nodes() {
                if alive[x] && !(fwd[x] && bwd[x]) {
                    alive[x] = false;
                    changed = true;
                }
            }
            for (i, e) in self.base.edges().iter().enumerate() {
                if edge_alive[i] && !(alive[e.u] && alive[e.v]) {
                    edge_alive[i] = false;
                }
            }
            if !changed {
                break;
            }
        }
        let removed_nodes = alive.iter().filter(|a| !**a).count();
        let kept_edges: Vec<Edge> = self
            .base
            .edges()
            .iter()
            .zip(&edge_alive)
            .filter(|(_, k)| **k)
            .map(|(e, _)| *e)
            .collect();
        let pruned = Graph::new(n, true, kept_edges)?;
        let (compact, _) = pruned.induced(&alive);
        Ok((Dag::from_graph(compact)?, removed_nodes))
    }
}

fn flood(next: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; next.len()];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for &y in &next[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ws_generate, WsParams};

    fn edge_set(dag: &Dag) -> Vec<(usize, usize)> {
        dag.edges().iter().map(|e| (e.u, e.v)).collect()
    }

    #[test]
    fn triangle_orientation() {
        let g = Graph::new(
            3,
            false,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(0, 2, 1.0)],
        )
        .unwrap();
        let dag = to_dag(&g).unwrap();
        let (input, output) = (dag.input_node(), dag.output_node());
        assert_eq!((input, output), (3, 4));
        assert_eq!(edge_set(&dag), vec![(0, 1), (0, 2), (1, 2), (2, output), (input, 0)]);
    }

    #[test]
    fn eight_cycle_has_single_source_and_sink() {
        let g = ws_generate(&WsParams::new(8, 2, 0.0, 0)).unwrap();
        let dag = to_dag(&g).unwrap();
        let input = dag.input_node();
        let from_input: Vec<usize> = dag.edges().iter().filter(|e| e.u == input).map(|e| e.v).collect();
        let to_output: Vec<usize> = dag.edges().iter().filter(|e| e.v == dag.output_node()).map(|e| e.u).collect();
        // 0 -> 1 and 0 -> 7 make node 0 the only source; 6 -> 7 and 0 -> 7 make 7 the only sink
        assert_eq!(from_input, vec![0]);
        assert_eq!(to_output, vec![7]);
        assert_eq!(dag.edges().len(), 10);
    }

    #[test]
    fn reorientation_is_idempotent() {
        let g = ws_generate(&WsParams::new(16, 4, 0.5, 3)).unwrap();
        let dag = to_dag(&g).unwrap();
        let again = Dag::from_graph(dag.graph().clone()).unwrap();
        assert_eq!(dag, again);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = Graph::new(4, false, vec![Edge::new(0, 1, 1.0), Edge::new(2, 3, 1.0)]).unwrap();
        assert!(matches!(to_dag(&g), Err(Error::Disconnected { components: 2 })));
    }

    #[test]
    fn single_node_graph() {
        let g = Graph::new(1, false, vec![]).unwrap();
        let dag = to_dag(&g).unwrap();
        assert_eq!(edge_set(&dag), vec![(0, 2), (1, 0)]);
    }

    #[test]
    fn retain_drops_dead_nodes() {
        // 0 -> 1 -> 2 and 0 -> 2; cutting 1 -> 2 strands node 1
        let g = Graph::new(
            3,
            false,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(0, 2, 1.0)],
        )
        .unwrap();
        let dag = to_dag(&g).unwrap();
        let cut = dag.graph().find_edge(1, 2).unwrap();
        let keep: Vec<bool> = (0..dag.edges().len()).map(|i| i != cut).collect();
        let (pruned, removed) = dag.retain_edges(&keep).unwrap();
        assert_eq!(removed, 1);
        assert_eq!(pruned.interior_count(), 2);
        assert_eq!(edge_set(&pruned), vec![(0, 1), (1, 3), (2, 0)]);
    }

    #[test]
    fn retain_reports_empty_network() {
        let g = Graph::new(2, false, vec![Edge::new(0, 1, 1.0)]).unwrap();
        let dag = to_dag(&g).unwrap();
        let keep = vec![false; dag.edges().len()];
        assert!(matches!(dag.retain_edges(&keep), Err(Error::EmptyNetwork)));
    }
}
