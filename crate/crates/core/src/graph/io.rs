//! Edge-list format:
//!
//! ```text
//! nodes <n> directed <0|1>
//! <u> <v> <w>
//! ...
//! ```
//!
//! Weights are written with Rust's shortest round-trip float formatting, so
//! `parse_graph(&render_graph(g)) == g` bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use super::{Edge, Graph};
use crate::error::{Error, Result};

pub fn render_graph(g: &Graph) -> String {
    let mut out = format!("nodes {} directed {}\n", g.node_count(), u8::from(g.is_directed()));
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {:?}", e.u, e.v, e.w);
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let header_err = || Error::Parse {
        line: 1,
        msg: format!("expected `nodes <n> directed <0|1>`, got `{header}`"),
    };
    let (n, directed) = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["nodes", n, "directed", d] => {
            let n: usize = n.parse().map_err(|_| header_err())?;
            let directed = match d {
                "0" => false,
                "1" => true,
                _ => return Err(header_err()),
            };
            (n, directed)
        }
        _ => return Err(header_err()),
    };
    if n == 0 {
        return Err(Error::Parse { line: 1, msg: "node count must be positive".into() });
    }

    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields[..] else {
            return Err(err(format!("expected `<u> <v> <w>`, got `{line}`")));
        };
        let u: usize = u.parse().map_err(|_| err(format!("bad node id `{u}`")))?;
        let v: usize = v.parse().map_err(|_| err(format!("bad node id `{v}`")))?;
        let w: f64 = w.parse().map_err(|_| err(format!("bad weight `{w}`")))?;
        if u >= n || v >= n {
            return Err(err(format!("dangling node id in `{line}` (graph has {n} nodes)")));
        }
        if u == v {
            return Err(err(format!("self-loop on node {u}")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(err(format!("weight must be finite and non-negative, got {w}")));
        }
        let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
        if !seen.insert(key) {
            return Err(err(format!("duplicate edge {u} {v}")));
        }
        edges.push(Edge::new(u, v, w));
    }
    Graph::new(n, directed, edges)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_graph(g))?;
    Ok(())
}

/// Graphviz rendering; node labels are ids, edge labels the weight to 4 decimals.
pub fn render_dot(g: &Graph) -> String {
    let (kind, arrow) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kind} G {{\n");
    for x in 0..g.node_count() {
        let _ = writeln!(out, "  {x} [label=\"{x}\"];");
    }
    for e in g.edges() {
        let _ = writeln!(out, "  {} {arrow} {} [label=\"{:.4}\"];", e.u, e.v, e.w);
    }
    out.push_str("}\n");
    out
}

pub fn write_dot(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_dot(g))?;
    Ok(())
}
