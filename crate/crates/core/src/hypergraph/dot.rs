use std::fmt::Write;

use super::Hypergraph;

/// Graphviz rendering: nodes as points, hyperedges as labeled boxes, tentacles
/// annotated with their 1-based position, external nodes tagged `ext:i`.
/// Output order is nodes by id, then edges by id.
pub fn to_dot(h: &Hypergraph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(name)).unwrap();
    writeln!(out, "  node [shape=point];").unwrap();
    for v in h.nodes() {
        match h.ext().iter().position(|x| *x == v) {
            Some(i) => writeln!(out, "  {v} [xlabel=\"ext:{}\"];", i + 1).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    for (i, e) in h.edges().iter().enumerate() {
        writeln!(
            out,
            "  e{i} [shape=box, style=filled, fillcolor=lightgrey, label={}];",
            quote(e.label.as_str())
        )
        .unwrap();
        for (pos, v) in e.att.iter().enumerate() {
            writeln!(out, "  e{i} -- {v} [label=\"{}\"];", pos + 1).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}
