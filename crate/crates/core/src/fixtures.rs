//! Bundled example grammars and their oracle-computed count tables.
//!
//! | name | grammar |
//! |---|---|
//! | `fig2_ambiguous` | arithmetic-expression graphs, ambiguous operator chains |
//! | `fig3_unambiguous` | the same language with right-leaning chains |
//! | `fig4_cnf` | a normal-form grammar for that language |
//! | `fig6_lemma_demo` | exercises every normalization rule |
//! | `anbncn` | string graphs of `a^n b^n c^n` |
//! | `node_chain` | edgeless graphs of every size, one derivation each |

use crate::counting::CountTables;
use crate::grammar::{Grammar, Production};
use crate::hypergraph::{Edge, Hypergraph, NodeId};
use crate::symbol::Symbol;

pub const NAMES: [&str; 6] = [
    "fig2_ambiguous",
    "fig3_unambiguous",
    "fig4_cnf",
    "fig6_lemma_demo",
    "anbncn",
    "node_chain",
];

/// Sidecar tables cover graph sizes up to this bound for every nonterminal of
/// smallest type.
pub const SIDECAR_SIZE: usize = 12;

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2_ambiguous" => include_str!("../fixtures/fig2_ambiguous.json"),
        "fig3_unambiguous" => include_str!("../fixtures/fig3_unambiguous.json"),
        "fig4_cnf" => include_str!("../fixtures/fig4_cnf.json"),
        "fig6_lemma_demo" => include_str!("../fixtures/fig6_lemma_demo.json"),
        "anbncn" => include_str!("../fixtures/anbncn.json"),
        "node_chain" => include_str!("../fixtures/node_chain.json"),
        _ => return None,
    })
}

/// Oracle-computed count tables of the fixture's normal form.
pub fn sidecar_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2_ambiguous" => include_str!("../fixtures/fig2_ambiguous.counts.json"),
        "fig3_unambiguous" => include_str!("../fixtures/fig3_unambiguous.counts.json"),
        "fig4_cnf" => include_str!("../fixtures/fig4_cnf.counts.json"),
        "fig6_lemma_demo" => include_str!("../fixtures/fig6_lemma_demo.counts.json"),
        "anbncn" => include_str!("../fixtures/anbncn.counts.json"),
        "node_chain" => include_str!("../fixtures/node_chain.counts.json"),
        _ => return None,
    })
}

/// Parses a bundled fixture. Panics on unknown names.
pub fn load(name: &str) -> Grammar {
    let src = source(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    Grammar::from_json_str(src).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn load_sidecar(name: &str) -> CountTables {
    let src = sidecar_source(name).unwrap_or_else(|| panic!("no sidecar for {name}"));
    CountTables::from_json_str(src).unwrap_or_else(|e| panic!("sidecar {name}: {e}"))
}

pub fn ambiguous_expressions() -> Grammar {
    load("fig2_ambiguous")
}

pub fn unambiguous_expressions() -> Grammar {
    load("fig3_unambiguous")
}

pub fn expressions_cnf() -> Grammar {
    load("fig4_cnf")
}

pub fn normalization_demo() -> Grammar {
    load("fig6_lemma_demo")
}

pub fn node_chain() -> Grammar {
    load("node_chain")
}

fn edge(label: &str, att: &[usize]) -> Edge {
    Edge::new(label, att.iter().map(|&v| NodeId(v)).collect())
}

fn ext(n: usize) -> Vec<NodeId> {
    (0..n).map(NodeId).collect()
}

/// String graphs of `a^n b^n c^n`, `n >= 0`.
///
/// `S` (type 2) spans the whole word from its first to its last node. `X`
/// (type 6) carries three parallel paths `x1..y1`, `x2..y2`, `x3..y3` that
/// grow by one `a`, `b` and `c` edge per step; `S` glues them end to end.
/// The word of length `3n` has `3n + 1` nodes, so sizes are `2` for the
/// empty word and `6n + 1` otherwise.
pub fn build_anbncn_grammar() -> Grammar {
    // X's external nodes: x1 y1 x2 y2 x3 y3 = 0..6.
    let x_step = Hypergraph::new(
        9,
        vec![
            edge("a", &[0, 6]),
            edge("b", &[2, 7]),
            edge("c", &[4, 8]),
            edge("X", &[6, 1, 7, 3, 8, 5]),
        ],
        ext(6),
    );
    let x_base = Hypergraph::new(
        6,
        vec![edge("a", &[0, 1]), edge("b", &[2, 3]), edge("c", &[4, 5])],
        ext(6),
    );
    // S's external nodes: u v = 0, 1; junctions p q = 2, 3.
    let s_word = Hypergraph::new(4, vec![edge("X", &[0, 2, 2, 3, 3, 1])], ext(2));
    Grammar {
        typing: [("S", 2), ("X", 6), ("a", 2), ("b", 2), ("c", 2)].into_iter().collect(),
        nonterminals: vec![Symbol::new("S"), Symbol::new("X")],
        terminals: vec![Symbol::new("a"), Symbol::new("b"), Symbol::new("c")],
        start: Symbol::new("S"),
        productions: vec![
            Production::in_edge_order("P0", "S", Hypergraph::discrete(2)),
            Production::in_edge_order("P1", "S", s_word),
            Production::in_edge_order("P2", "X", x_step),
            Production::in_edge_order("P3", "X", x_base),
        ],
    }
}

/// The word spelled by a string graph: follows edges from the first external
/// node to the second. `None` if the graph is not a simple path of type-2
/// edges between its two external nodes.
pub fn read_string_graph(h: &Hypergraph) -> Option<String> {
    let [start, end] = h.ext() else { return None };
    if h.edge_count() == 0 {
        return (h.node_count() == 2).then(String::new);
    }
    if h.edges().iter().any(|e| e.att.len() != 2) || h.node_count() != h.edge_count() + 1 {
        return None;
    }
    let mut out = String::new();
    let mut at = *start;
    let mut used = vec![false; h.edge_count()];
    while at != *end {
        let (i, e) = h
            .edges()
            .iter()
            .enumerate()
            .find(|(i, e)| !used[*i] && e.att[0] == at)?;
        used[i] = true;
        out.push_str(e.label.as_str());
        at = e.att[1];
    }
    used.iter().all(|&u| u).then_some(out)
}

#[cfg(test)]
mod tests;
