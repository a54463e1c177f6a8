//! Hypergraphs with labeled hyperedges, ordered attachments and a sequence of
//! external nodes, plus hyperedge replacement.
//!
//! Node and edge identifiers are dense indices. They carry no meaning across
//! operations: every replacement renumbers, and two graphs are compared only up
//! to isomorphism (see [`canonical_form`]).

mod canon;
mod dot;
mod json;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::symbol::{Symbol, Typing};

pub use canon::{canonical_form, is_isomorphic, CanonicalForm, CANONICAL_SIZE_LIMIT};
pub use dot::to_dot;
pub use json::{EdgeDoc, HypergraphDoc};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: Symbol,
    pub att: Vec<NodeId>,
}

impl Edge {
    pub fn new(label: impl Into<Symbol>, att: Vec<NodeId>) -> Self {
        Edge {
            label: label.into(),
            att,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("label `{0}` has no arity")]
    UnknownLabel(Symbol),
    #[error("edge {0} does not exist")]
    MissingEdge(EdgeId),
    #[error("edge {edge} is assigned more than one replacement")]
    DuplicateAssignment { edge: EdgeId },
    #[error("edge {edge} has {attachments} attachments but the replacement has type {replacement_type}")]
    TypeMismatch {
        edge: EdgeId,
        attachments: usize,
        replacement_type: usize,
    },
    #[error("replacement graph is malformed: {0}")]
    MalformedReplacement(String),
    #[error("graph of size {size} exceeds the canonical form limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("duplicate node id `{0}`")]
    DuplicateNodeId(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("unknown node id `{0}`")]
    UnknownNodeId(String),
}

/// A broken hypergraph invariant, as reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DanglingAttachment {
        edge: EdgeId,
        position: usize,
        node: NodeId,
    },
    DanglingExternal {
        position: usize,
        node: NodeId,
    },
    DuplicateExternal {
        node: NodeId,
    },
    UnknownLabel {
        edge: EdgeId,
        label: Symbol,
    },
    ArityMismatch {
        edge: EdgeId,
        label: Symbol,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingAttachment {
                edge,
                position,
                node,
            } => write!(f, "attachment {} of {edge} is unknown node {node}", position + 1),
            Violation::DanglingExternal { position, node } => {
                write!(f, "external node {} is unknown node {node}", position + 1)
            }
            Violation::DuplicateExternal { node } => {
                write!(f, "duplicate external node {node}")
            }
            Violation::UnknownLabel { edge, label } => {
                write!(f, "{edge} has label `{label}` with no arity")
            }
            Violation::ArityMismatch {
                edge,
                label,
                expected,
                found,
            } => write!(
                f,
                "{edge} labeled `{label}` has {found} attachments, expected {expected}"
            ),
        }
    }
}

/// A finite hypergraph. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    node_count: usize,
    edges: Vec<Edge>,
    ext: Vec<NodeId>,
}

impl Hypergraph {
    /// Builds a graph without checking it; run [`validate`] on untrusted input.
    pub fn new(node_count: usize, edges: Vec<Edge>, ext: Vec<NodeId>) -> Self {
        Hypergraph {
            node_count,
            edges,
            ext,
        }
    }

    pub fn empty() -> Self {
        Self::new(0, Vec::new(), Vec::new())
    }

    /// `k` external nodes and nothing else: the right-hand side of an empty
    /// production of a type-`k` nonterminal.
    pub fn discrete(k: usize) -> Self {
        Self::new(k, Vec::new(), (0..k).map(NodeId).collect())
    }

    /// The handle `label•`: one edge attached to fresh nodes that are all external.
    pub fn handle(label: &Symbol, typing: &Typing) -> Result<Self, HypergraphError> {
        let arity = typing
            .arity(label.as_str())
            .ok_or_else(|| HypergraphError::UnknownLabel(label.clone()))?;
        Ok(Self::handle_with_arity(label.clone(), arity))
    }

    pub fn handle_with_arity(label: Symbol, arity: usize) -> Self {
        let nodes: Vec<NodeId> = (0..arity).map(NodeId).collect();
        Self::new(arity, vec![Edge { label, att: nodes.clone() }], nodes)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id.0)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn ext(&self) -> &[NodeId] {
        &self.ext
    }

    /// Number of external nodes.
    pub fn arity(&self) -> usize {
        self.ext.len()
    }

    /// Nodes plus hyperedges.
    pub fn size(&self) -> usize {
        self.node_count + self.edges.len()
    }

    /// Nodes that are not external.
    pub fn internal_node_count(&self) -> usize {
        let ext: BTreeSet<NodeId> = self.ext.iter().copied().collect();
        self.node_count - ext.len()
    }

    pub fn is_external(&self, node: NodeId) -> bool {
        self.ext.contains(&node)
    }

    /// `self[edge/repl]`.
    pub fn replace(&self, edge: EdgeId, repl: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
        self.replace_all(&[(edge, repl)])
    }

    /// Simultaneous replacement `self[e1/R1, ..., en/Rn]`.
    ///
    /// Unreplaced edges keep their relative order and come first; the edges of
    /// each replacement follow, grouped by ascending host edge id. New internal
    /// nodes are numbered after the host's nodes in the same order. The result
    /// therefore does not depend on the order of `assignment`.
    pub fn replace_all(
        &self,
        assignment: &[(EdgeId, &Hypergraph)],
    ) -> Result<Hypergraph, HypergraphError> {
        let mut sorted: Vec<(EdgeId, &Hypergraph)> = assignment.to_vec();
        sorted.sort_by_key(|(e, _)| *e);
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(HypergraphError::DuplicateAssignment { edge: pair[0].0 });
            }
        }
        for (e, repl) in &sorted {
            let host = self.edge(*e).ok_or(HypergraphError::MissingEdge(*e))?;
            if host.att.len() != repl.arity() {
                return Err(HypergraphError::TypeMismatch {
                    edge: *e,
                    attachments: host.att.len(),
                    replacement_type: repl.arity(),
                });
            }
            repl.check_replacement_shape()?;
        }

        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| sorted.binary_search_by_key(&EdgeId(*i), |(e, _)| *e).is_err())
            .map(|(_, e)| e.clone())
            .collect();
        let mut node_count = self.node_count;
        for (e, repl) in &sorted {
            let host = &self.edges[e.0];
            let mut map: Vec<Option<NodeId>> = vec![None; repl.node_count];
            for (i, x) in repl.ext.iter().enumerate() {
                map[x.0] = Some(host.att[i]);
            }
            let map: Vec<NodeId> = map
                .into_iter()
                .map(|slot| {
                    slot.unwrap_or_else(|| {
                        node_count += 1;
                        NodeId(node_count - 1)
                    })
                })
                .collect();
            edges.extend(repl.edges.iter().map(|re| Edge {
                label: re.label.clone(),
                att: re.att.iter().map(|n| map[n.0]).collect(),
            }));
        }
        Ok(Hypergraph {
            node_count,
            edges,
            ext: self.ext.clone(),
        })
    }

    fn check_replacement_shape(&self) -> Result<(), HypergraphError> {
        let mut seen = BTreeSet::new();
        for x in &self.ext {
            if x.0 >= self.node_count {
                return Err(HypergraphError::MalformedReplacement(format!(
                    "external node {x} is out of range"
                )));
            }
            if !seen.insert(*x) {
                return Err(HypergraphError::MalformedReplacement(format!(
                    "external node {x} is repeated"
                )));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(n) = e.att.iter().find(|n| n.0 >= self.node_count) {
                return Err(HypergraphError::MalformedReplacement(format!(
                    "attachment {n} of e{i} is out of range"
                )));
            }
        }
        Ok(())
    }

    /// Same graph with `edge` relabeled.
    pub fn relabel(&self, edge: EdgeId, label: Symbol) -> Result<Hypergraph, HypergraphError> {
        let mut out = self.clone();
        out.edges
            .get_mut(edge.0)
            .ok_or(HypergraphError::MissingEdge(edge))?
            .label = label;
        Ok(out)
    }

    /// Same graph with only `keep` edges (in the given order) retained.
    pub(crate) fn with_edges(&self, keep: &[EdgeId]) -> Hypergraph {
        Hypergraph {
            node_count: self.node_count,
            edges: keep.iter().map(|e| self.edges[e.0].clone()).collect(),
            ext: self.ext.clone(),
        }
    }
}

/// Checks every hypergraph invariant against `typing`; an empty result means
/// the graph is well formed.
pub fn validate(h: &Hypergraph, typing: &Typing) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (position, &node) in h.ext.iter().enumerate() {
        if node.0 >= h.node_count {
            out.push(Violation::DanglingExternal { position, node });
        } else if !seen.insert(node) {
            out.push(Violation::DuplicateExternal { node });
        }
    }
    for (i, edge) in h.edges.iter().enumerate() {
        let id = EdgeId(i);
        for (position, &node) in edge.att.iter().enumerate() {
            if node.0 >= h.node_count {
                out.push(Violation::DanglingAttachment { edge: id, position, node });
            }
        }
        match typing.arity(edge.label.as_str()) {
            None => out.push(Violation::UnknownLabel {
                edge: id,
                label: edge.label.clone(),
            }),
            Some(expected) if expected != edge.att.len() => out.push(Violation::ArityMismatch {
                edge: id,
                label: edge.label.clone(),
                expected,
                found: edge.att.len(),
            }),
            Some(_) => {}
        }
    }
    out
}
