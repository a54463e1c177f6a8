//! Hyperedge replacement grammars, ordered derivation trees and their yields.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{validate, EdgeId, Hypergraph, HypergraphDoc, HypergraphError, Violation};
use crate::symbol::{Symbol, Typing};

/// `lhs ::= rhs`, with every rhs edge carrying a distinct rank `1..=|E|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub name: String,
    pub lhs: Symbol,
    pub rhs: Hypergraph,
    /// Rank of each rhs edge, indexed like `rhs.edges()`.
    pub marks: Vec<usize>,
}

impl Production {
    pub fn new(name: impl Into<String>, lhs: impl Into<Symbol>, rhs: Hypergraph, marks: Vec<usize>) -> Self {
        Production {
            name: name.into(),
            lhs: lhs.into(),
            rhs,
            marks,
        }
    }

    /// Ranks the rhs edges in the order they are listed.
    pub fn in_edge_order(name: impl Into<String>, lhs: impl Into<Symbol>, rhs: Hypergraph) -> Self {
        let marks = (1..=rhs.edge_count()).collect();
        Self::new(name, lhs, rhs, marks)
    }

    /// Edge ids sorted by rank.
    pub fn edges_by_mark(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self.rhs.edge_ids().collect();
        ids.sort_by_key(|e| self.marks.get(e.0).copied().unwrap_or(usize::MAX));
        ids
    }

    /// Nonterminal edges sorted by rank: the child order of derivation trees.
    pub fn nonterminal_edges(&self, grammar: &Grammar) -> Vec<EdgeId> {
        self.edges_by_mark()
            .into_iter()
            .filter(|e| grammar.is_nonterminal(self.rhs.edges()[e.0].label.as_str()))
            .collect()
    }

    /// No edges and every node external.
    pub fn is_empty_production(&self) -> bool {
        self.rhs.edge_count() == 0 && self.rhs.internal_node_count() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub typing: Typing,
    pub nonterminals: Vec<Symbol>,
    pub terminals: Vec<Symbol>,
    pub start: Symbol,
    /// Declaration order is significant: it fixes the sampler's choice order.
    pub productions: Vec<Production>,
}

impl Grammar {
    pub fn is_nonterminal(&self, label: &str) -> bool {
        self.nonterminals.iter().any(|n| n.as_str() == label)
    }

    pub fn is_terminal(&self, label: &str) -> bool {
        self.terminals.iter().any(|t| t.as_str() == label)
    }

    pub fn arity(&self, label: &str) -> Option<usize> {
        self.typing.arity(label)
    }

    pub fn production(&self, name: &str) -> Option<&Production> {
        self.productions.iter().find(|p| p.name == name)
    }

    pub fn productions_for<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = &'a Production> + 'a {
        self.productions.iter().filter(move |p| p.lhs.as_str() == lhs)
    }

    /// Whether some production has an edge labeled `label` in its rhs.
    pub fn occurs_in_rhs(&self, label: &str) -> bool {
        self.productions
            .iter()
            .any(|p| p.rhs.edges().iter().any(|e| e.label.as_str() == label))
    }

    pub fn from_json_str(s: &str) -> Result<Self, GrammarError> {
        let doc: GrammarDoc = serde_json::from_str(s)?;
        Self::from_doc(&doc)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("grammar serializes");
        s.push('\n');
        s
    }

    pub fn from_doc(doc: &GrammarDoc) -> Result<Self, GrammarError> {
        let mut productions = Vec::with_capacity(doc.productions.len());
        for p in &doc.productions {
            let (rhs, ids) = Hypergraph::from_doc_with_edge_ids(&p.rhs).map_err(|source| {
                GrammarError::Rhs {
                    production: p.name.clone(),
                    source,
                }
            })?;
            let marks = match &p.marks {
                None => (1..=rhs.edge_count()).collect(),
                Some(map) => {
                    // Unmarked edges get rank 0, which validation rejects.
                    let mut marks = vec![0; rhs.edge_count()];
                    for (edge, &rank) in map {
                        let id = ids.get(edge).ok_or_else(|| GrammarError::UnknownMarkedEdge {
                            production: p.name.clone(),
                            edge: edge.clone(),
                        })?;
                        marks[id.0] = rank;
                    }
                    marks
                }
            };
            productions.push(Production::new(p.name.clone(), p.lhs.as_str(), rhs, marks));
        }
        Ok(Grammar {
            typing: doc.types.iter().map(|(s, &a)| (s.as_str(), a)).collect(),
            nonterminals: doc.nonterminals.iter().map(|s| Symbol::new(s)).collect(),
            terminals: doc.terminals.iter().map(|s| Symbol::new(s)).collect(),
            start: Symbol::new(&doc.start),
            productions,
        })
    }

    pub fn to_doc(&self) -> GrammarDoc {
        GrammarDoc {
            types: self.typing.iter().map(|(s, a)| (s.to_string(), a)).collect(),
            nonterminals: self.nonterminals.iter().map(|s| s.to_string()).collect(),
            terminals: self.terminals.iter().map(|s| s.to_string()).collect(),
            start: self.start.to_string(),
            productions: self
                .productions
                .iter()
                .map(|p| {
                    let rhs = p.rhs.to_doc();
                    let marks = rhs
                        .edges
                        .iter()
                        .zip(&p.marks)
                        .map(|(e, &m)| (e.id.clone(), m))
                        .collect();
                    ProductionDoc {
                        name: p.name.clone(),
                        lhs: p.lhs.to_string(),
                        rhs,
                        marks: Some(marks),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarDoc {
    pub types: BTreeMap<String, usize>,
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub start: String,
    pub productions: Vec<ProductionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductionDoc {
    pub name: String,
    pub lhs: String,
    pub rhs: HypergraphDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marks: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("invalid grammar JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("production {production}: {source}")]
    Rhs {
        production: String,
        source: HypergraphError,
    },
    #[error("production {production}: mark refers to unknown edge `{edge}`")]
    UnknownMarkedEdge { production: String, edge: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrammarViolation {
    OverlappingAlphabets(Symbol),
    UntypedSymbol(Symbol),
    StartNotNonterminal(Symbol),
    DuplicateProductionName(String),
    LhsNotNonterminal { production: String, lhs: Symbol },
    UnknownRhsLabel { production: String, label: Symbol },
    Rhs { production: String, violation: Violation },
    TypeMismatch { production: String, lhs_type: usize, rhs_type: usize },
    MarksNotBijective { production: String },
}

impl fmt::Display for GrammarViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OverlappingAlphabets(s) => write!(f, "`{s}` is both terminal and nonterminal"),
            Self::UntypedSymbol(s) => write!(f, "`{s}` has no arity"),
            Self::StartNotNonterminal(s) => write!(f, "start symbol `{s}` is not a nonterminal"),
            Self::DuplicateProductionName(n) => write!(f, "production name {n} is used twice"),
            Self::LhsNotNonterminal { production, lhs } => {
                write!(f, "{production}: lhs `{lhs}` is not a nonterminal")
            }
            Self::UnknownRhsLabel { production, label } => {
                write!(f, "{production}: rhs label `{label}` is not in the grammar's alphabets")
            }
            Self::Rhs { production, violation } => write!(f, "{production}: {violation}"),
            Self::TypeMismatch {
                production,
                lhs_type,
                rhs_type,
            } => write!(f, "{production}: rhs has type {rhs_type}, lhs has type {lhs_type}"),
            Self::MarksNotBijective { production } => {
                write!(f, "{production}: marks are not a ranking 1..n of the rhs edges")
            }
        }
    }
}

/// Empty iff `g` is a well-formed grammar.
pub fn validate_grammar(g: &Grammar) -> Vec<GrammarViolation> {
    let mut out = Vec::new();
    for n in &g.nonterminals {
        if g.terminals.contains(n) {
            out.push(GrammarViolation::OverlappingAlphabets(n.clone()));
        }
    }
    for s in g.nonterminals.iter().chain(&g.terminals) {
        if !g.typing.contains(s.as_str()) {
            out.push(GrammarViolation::UntypedSymbol(s.clone()));
        }
    }
    if !g.nonterminals.contains(&g.start) {
        out.push(GrammarViolation::StartNotNonterminal(g.start.clone()));
    }
    let mut names = BTreeSet::new();
    for p in &g.productions {
        if !names.insert(p.name.as_str()) {
            out.push(GrammarViolation::DuplicateProductionName(p.name.clone()));
        }
        if !g.nonterminals.contains(&p.lhs) {
            out.push(GrammarViolation::LhsNotNonterminal {
                production: p.name.clone(),
                lhs: p.lhs.clone(),
            });
        }
        let mut reported = BTreeSet::new();
        for e in p.rhs.edges() {
            if !g.is_nonterminal(e.label.as_str())
                && !g.is_terminal(e.label.as_str())
                && reported.insert(e.label.clone())
            {
                out.push(GrammarViolation::UnknownRhsLabel {
                    production: p.name.clone(),
                    label: e.label.clone(),
                });
            }
        }
        out.extend(validate(&p.rhs, &g.typing).into_iter().map(|violation| GrammarViolation::Rhs {
            production: p.name.clone(),
            violation,
        }));
        if let Some(lhs_type) = g.arity(p.lhs.as_str()) {
            if lhs_type != p.rhs.arity() {
                out.push(GrammarViolation::TypeMismatch {
                    production: p.name.clone(),
                    lhs_type,
                    rhs_type: p.rhs.arity(),
                });
            }
        }
        let mut ranks = p.marks.clone();
        ranks.sort_unstable();
        if ranks.len() != p.rhs.edge_count() || ranks.iter().enumerate().any(|(i, &r)| r != i + 1) {
            out.push(GrammarViolation::MarksNotBijective {
                production: p.name.clone(),
            });
        }
    }
    out
}

/// Every production satisfies `|rhs| - type(lhs) >= 1`, so no direct
/// derivation shrinks a graph.
pub fn is_non_contracting(g: &Grammar) -> bool {
    g.productions.iter().all(|p| {
        let ty = g.arity(p.lhs.as_str()).unwrap_or(p.rhs.arity());
        p.rhs.size() > ty
    })
}

/// Whether the start symbol has an empty production.
pub fn has_start_empty_production(g: &Grammar) -> bool {
    g.productions_for(g.start.as_str()).any(Production::is_empty_production)
}

/// An ordered derivation tree: children follow the ranks of the nonterminal
/// edges of the root production.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivationTree {
    pub production: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn leaf(production: impl Into<String>) -> Self {
        DerivationTree {
            production: production.into(),
            children: Vec::new(),
        }
    }

    pub fn node(production: impl Into<String>, children: Vec<DerivationTree>) -> Self {
        DerivationTree {
            production: production.into(),
            children,
        }
    }

    /// Pre-order production names: the leftmost derivation.
    pub fn leftmost_sequence(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t.production.clone());
            stack.extend(t.children.iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            count += 1;
            stack.extend(&t.children);
        }
        count
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("no production named {0}")]
    UnknownProduction(String),
    #[error("{production} has {expected} nonterminal edges but the tree node has {found} children")]
    ChildCount {
        production: String,
        expected: usize,
        found: usize,
    },
    #[error("{production}: edge labeled `{label}` cannot be derived by {child}")]
    LabelMismatch {
        production: String,
        label: Symbol,
        child: String,
    },
    #[error(transparent)]
    Replacement(#[from] HypergraphError),
}

/// `yield(p(t1..tn)) = rhs(p)[e1/yield(t1), ..., en/yield(tn)]`.
pub fn yield_of(g: &Grammar, t: &DerivationTree) -> Result<Hypergraph, DerivationError> {
    let index: HashMap<&str, &Production> =
        g.productions.iter().map(|p| (p.name.as_str(), p)).collect();
    yield_rec(g, &index, t)
}

fn yield_rec(
    g: &Grammar,
    index: &HashMap<&str, &Production>,
    t: &DerivationTree,
) -> Result<Hypergraph, DerivationError> {
    let p = index
        .get(t.production.as_str())
        .ok_or_else(|| DerivationError::UnknownProduction(t.production.clone()))?;
    let slots = p.nonterminal_edges(g);
    if slots.len() != t.children.len() {
        return Err(DerivationError::ChildCount {
            production: p.name.clone(),
            expected: slots.len(),
            found: t.children.len(),
        });
    }
    let mut parts = Vec::with_capacity(slots.len());
    for (&e, child) in slots.iter().zip(&t.children) {
        let label = &p.rhs.edges()[e.0].label;
        let child_lhs = index
            .get(child.production.as_str())
            .map(|c| &c.lhs)
            .ok_or_else(|| DerivationError::UnknownProduction(child.production.clone()))?;
        if child_lhs != label {
            return Err(DerivationError::LabelMismatch {
                production: p.name.clone(),
                label: label.clone(),
                child: child.production.clone(),
            });
        }
        parts.push((e, yield_rec(g, index, child)?));
    }
    let refs: Vec<(EdgeId, &Hypergraph)> = parts.iter().map(|(e, h)| (*e, h)).collect();
    Ok(p.rhs.replace_all(&refs)?)
}

/// `h =>_p h'` at edge `e`.
pub fn direct_derive(
    g: &Grammar,
    h: &Hypergraph,
    e: EdgeId,
    production: &str,
) -> Result<Hypergraph, DerivationError> {
    let p = g
        .production(production)
        .ok_or_else(|| DerivationError::UnknownProduction(production.to_string()))?;
    let edge = h.edge(e).ok_or(HypergraphError::MissingEdge(e))?;
    if edge.label != p.lhs {
        return Err(DerivationError::LabelMismatch {
            production: production.to_string(),
            label: edge.label.clone(),
            child: production.to_string(),
        });
    }
    Ok(h.replace(e, &p.rhs)?)
}

/// Replaces edges of a marked rhs and re-ranks the result so that the edges
/// brought in by a replacement take the place of the edge they replace.
pub(crate) fn substitute_marked(
    rhs: &Hypergraph,
    marks: &[usize],
    assignment: &[(EdgeId, &Hypergraph, &[usize])],
) -> Result<(Hypergraph, Vec<usize>), HypergraphError> {
    let pairs: Vec<(EdgeId, &Hypergraph)> = assignment.iter().map(|(e, h, _)| (*e, *h)).collect();
    let out = rhs.replace_all(&pairs)?;
    let mut sorted: Vec<&(EdgeId, &Hypergraph, &[usize])> = assignment.iter().collect();
    sorted.sort_by_key(|(e, _, _)| *e);
    // Same layout as `replace_all`: kept edges, then replacements by host id.
    let mut keys: Vec<(usize, usize)> = rhs
        .edge_ids()
        .filter(|e| sorted.binary_search_by_key(e, |(h, _, _)| *h).is_err())
        .map(|e| (marks[e.0], 0))
        .collect();
    for (host, _, inner) in sorted {
        keys.extend(inner.iter().map(|&m| (marks[host.0], m)));
    }
    Ok((out, ranks_of(&keys)))
}

/// Dense 1-based ranks of `keys`.
pub(crate) fn ranks_of<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    let mut ranks = vec![0; keys.len()];
    for (r, i) in order.into_iter().enumerate() {
        ranks[i] = r + 1;
    }
    ranks
}
