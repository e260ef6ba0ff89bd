//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::index::sample;
use rand::Rng;
use riccinets::graph::{Dag, Edge, Graph};

pub const INF: i64 = i64::MAX / 4;

/// Connected undirected graph on `n` nodes with integer weights in `1..=max_w`:
/// a random spanning tree plus `extra` random chords.
pub fn random_int_graph(rng: &mut impl Rng, n: usize, extra: usize, max_w: i64) -> (Graph, Vec<(usize, usize, i64)>) {
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    let has = |edges: &[(usize, usize, i64)], a: usize, b: usize| {
        edges.iter().any(|&(u, v, _)| (u, v) == (a.min(b), a.max(b)))
    };
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, rng.random_range(1..=max_w)));
    }
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b && !has(&edges, a, b) {
            edges.push((a.min(b), a.max(b), rng.random_range(1..=max_w)));
        }
    }
    let g = Graph::new(n, false, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w as f64)).collect()).unwrap();
    (g, edges)
}

/// All-pairs distances by Floyd-Warshall over integer weights.
pub fn floyd(n: usize, edges: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v, w) in edges {
        d[u][v] = d[u][v].min(w);
        d[v][u] = d[v][u].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Single-source distances by Bellman-Ford over real weights, ignoring
/// direction.
pub fn bellman_ford(g: &Graph, source: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; g.node_count()];
    d[source] = 0.0;
    for _ in 0..g.node_count() {
        let mut changed = false;
        for e in g.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if d[a] + e.w < d[b] {
                    d[b] = d[a] + e.w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// Measure on `k` distinct random nodes with integer masses summing to `total`,
/// each at least 1.
pub fn random_int_measure(rng: &mut impl Rng, n: usize, k: usize, total: i64) -> Vec<(usize, i64)> {
    let nodes = sample(rng, n, k).into_vec();
    let mut cuts: Vec<i64> = sample(rng, (total - 1) as usize, k - 1).into_iter().map(|c| c as i64 + 1).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(k);
    for (i, &node) in nodes.iter().enumerate() {
        let next = if i + 1 == k { total } else { cuts[i] };
        out.push((node, next - prev));
        prev = next;
    }
    out
}

/// Minimum transport cost by negative-cycle cancelling on the bipartite
/// residual graph, starting from the north-west-corner plan. Pure integers.
pub fn transport_oracle(supply: &[i64], demand: &[i64], cost: &[Vec<i64>]) -> i64 {
    let (s, t) = (supply.len(), demand.len());
    assert_eq!(supply.iter().sum::<i64>(), demand.iter().sum::<i64>());
    let mut flow = vec![vec![0i64; t]; s];
    let (mut a, mut b) = (supply.to_vec(), demand.to_vec());
    let (mut i, mut j) = (0, 0);
    while i < s && j < t {
        let m = a[i].min(b[j]);
        flow[i][j] += m;
        a[i] -= m;
        b[j] -= m;
        if a[i] == 0 {
            i += 1;
        } else {
            j += 1;
        }
    }
    // nodes 0..s are sources, s..s+t sinks; arcs i->j always open, j->i when flow > 0
    loop {
        let n = s + t;
        let mut dist = vec![0i64; n];
        let mut pred = vec![usize::MAX; n];
        let mut last = usize::MAX;
        for _ in 0..n {
            last = usize::MAX;
            for i in 0..s {
                for j in 0..t {
                    if dist[i] + cost[i][j] < dist[s + j] {
                        dist[s + j] = dist[i] + cost[i][j];
                        pred[s + j] = i;
                        last = s + j;
                    }
                    if flow[i][j] > 0 && dist[s + j] - cost[i][j] < dist[i] {
                        dist[i] = dist[s + j] - cost[i][j];
                        pred[i] = s + j;
                        last = i;
                    }
                }
            }
            if last == usize::MAX {
                break;
            }
        }
        if last == usize::MAX {
            break;
        }
        let mut v = last;
        for _ in 0..n {
            v = pred[v];
        }
        let mut cycle = vec![v];
        let mut u = pred[v];
        while u != v {
            cycle.push(u);
            u = pred[u];
        }
        cycle.reverse();
        // consecutive pairs (from, to) along the cycle
        let arcs: Vec<(usize, usize)> = (0..cycle.len()).map(|k| (cycle[k], cycle[(k + 1) % cycle.len()])).collect();
        let push = arcs
            .iter()
            .filter(|&&(from, _)| from >= s)
            .map(|&(from, to)| flow[to][from - s])
            .min()
            .expect("a negative cycle uses a reverse arc");
        for &(from, to) in &arcs {
            if from < s {
                flow[from][to - s] += push;
            } else {
                flow[to][from - s] -= push;
            }
        }
    }
    (0..s).flat_map(|i| (0..t).map(move |j| (i, j))).map(|(i, j)| flow[i][j] * cost[i][j]).sum()
}

/// Edge and node removal counts of mean-threshold pruning, recomputed by
/// brute-force reachability.
pub fn prune_oracle(dag: &Dag, weights: &[f64]) -> (usize, usize) {
    let n = dag.node_count();
    let (input, output) = (dag.input_node(), dag.output_node());
    let mean = weights.iter().sum::<f64>() / weights.len() as f64;
    let mut alive_edge: Vec<bool> = dag
        .edges()
        .iter()
        .zip(weights)
        .map(|(e, &w)| e.u == input || e.v == output || w <= mean)
        .collect();
    let mut alive_node = vec![true; n];
    loop {
        let reach = |forward: bool, start: usize, alive_edge: &[bool], alive_node: &[bool]| {
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut changed = true;
            while changed {
                changed = false;
                for (e, &ok) in dag.edges().iter().zip(alive_edge) {
                    let (a, b) = if forward { (e.u, e.v) } else { (e.v, e.u) };
                    if ok && alive_node[a] && alive_node[b] && seen[a] && !seen[b] {
                        seen[b] = true;
                        changed = true;
                    }
                }
            }
            seen
        };
        let from_input = reach(true, input, &alive_edge, &alive_node);
        let to_output = reach(false, output, &alive_edge, &alive_node);
        let mut changed = false;
        for x in 0..n {
            if x != input && x != output && alive_node[x] && !(from_input[x] && to_output[x]) {
                alive_node[x] = false;
                changed = true;
            }
        }
        for (k, e) in dag.edges().iter().enumerate() {
            if alive_edge[k] && !(alive_node[e.u] && alive_node[e.v]) {
                alive_edge[k] = false;
            }
        }
        if !changed {
            break;
        }
    }
    (
        alive_edge.iter().filter(|a| !**a).count(),
        alive_node.iter().filter(|a| !**a).count(),
    )
}

/// Relative error `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
