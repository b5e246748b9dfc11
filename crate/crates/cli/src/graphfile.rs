//! Plain-text graph format.
//!
//! ```text
//! # comment
//! graph 3
//! edge 0 1
//! edge 2 2
//! ```
//!
//! Vertices are 0-based and `edge v v` declares a self-loop. A repeated
//! `edge` line toggles the edge again, so two identical lines cancel.

use std::fmt::Write;

use qgraph::Graph;

use crate::error::ParseError;

pub fn parse_graph(text: &str, file: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| ParseError::new(file, line, msg);
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match (tokens[0], graph.as_mut()) {
            ("graph", None) => {
                if tokens.len() != 2 {
                    return Err(err("expected `graph <n>`".into()));
                }
                let n = parse_index(tokens[1]).map_err(err)?;
                graph = Some(Graph::empty(n));
            }
            ("graph", Some(_)) => return Err(err("duplicate `graph` header".into())),
            ("edge", None) => return Err(err("missing `graph <n>` header before first edge".into())),
            ("edge", Some(g)) => {
                if tokens.len() != 3 {
                    return Err(err("expected `edge <u> <v>`".into()));
                }
                let u = parse_index(tokens[1]).map_err(err)?;
                let v = parse_index(tokens[2]).map_err(err)?;
                g.toggle_edge(u, v).map_err(|e| err(e.to_string()))?;
            }
            (other, _) => return Err(err(format!("unknown keyword `{other}`"))),
        }
    }
    graph.ok_or_else(|| ParseError::new(file, text.lines().count().max(1), "missing `graph <n>` header".into()))
}

pub(crate) fn parse_index(token: &str) -> Result<usize, String> {
    token
        .parse::<usize>()
        .map_err(|_| format!("`{token}` is not a vertex index"))
}

/// Canonical text: header, then every edge and loop `u <= v` in
/// lexicographic order.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.n());
    for u in 0..g.n() {
        if g.has_loop(u) {
            writeln!(out, "edge {u} {u}").unwrap();
        }
        for v in g.neighbors(u).iter_ones().filter(|&v| v > u) {
            writeln!(out, "edge {u} {v}").unwrap();
        }
    }
    out
}
