//! Chomsky normal form: conformance, normalization and the shorthand view
//! used by the counting phase.
//!
//! A production is in normal form when its rhs is one of
//! - two nonterminal edges (ranks 1 and 2) plus any internal nodes,
//! - one terminal edge plus any internal nodes,
//! - no edges and at least one internal node,
//! - no edges and no internal nodes, only for the start symbol and only if the
//!   start symbol occurs in no rhs.
//!
//! [`to_cnf`] rewrites in four passes: empty productions, unit productions,
//! splitting of long right-hand sides, and outlining of terminal edges from
//! binary ones. Fresh nonterminals are named `_T1, _T2, ...` (a fresh start
//! symbol is `_S0`), skipping names already in use; fresh productions are
//! named after the productions they were built from.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::{ranks_of, substitute_marked, validate_grammar, Grammar, GrammarViolation, Production};
use crate::hypergraph::{canonical_form, CanonicalForm, Edge, EdgeId, Hypergraph, HypergraphError, NodeId};
use crate::symbol::{Symbol, Typing};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShorthandKind {
    /// Ranks 1 and 2, in that order.
    NonTerminal(Symbol, Symbol),
    Terminal(Symbol),
    Lambda,
}

/// `lhs -> kind, internal`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shorthand {
    pub name: String,
    pub lhs: Symbol,
    pub kind: ShorthandKind,
    /// Number of internal nodes of the rhs.
    pub internal: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CnfViolation {
    /// The rhs matches none of the normal-form shapes.
    Shape {
        production: String,
        edges: usize,
        nonterminal_edges: usize,
        internal: usize,
    },
    /// An empty production whose lhs is not the start symbol.
    EmptyNotStart { production: String },
    /// An empty start production while the start symbol occurs in some rhs.
    StartEmptyButStartInRhs { production: String },
}

impl fmt::Display for CnfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape {
                production,
                edges,
                nonterminal_edges,
                internal,
            } => write!(
                f,
                "{production}: rhs with {edges} edges ({nonterminal_edges} nonterminal) and {internal} internal nodes is not a normal-form shape"
            ),
            Self::EmptyNotStart { production } => {
                write!(f, "{production}: empty production for a symbol other than the start symbol")
            }
            Self::StartEmptyButStartInRhs { production } => write!(
                f,
                "{production}: empty start production while the start symbol occurs in a right-hand side"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum CnfError {
    #[error("grammar is invalid: {}", join(.0))]
    Invalid(Vec<GrammarViolation>),
    #[error("grammar is not in normal form: {}", join(.0))]
    NotCnf(Vec<CnfViolation>),
    #[error("unit productions for `{0}` keep producing new right-hand sides; the grammar has a growing unit cycle")]
    UnitCycle(Symbol),
    #[error("production {production} has {count} nullable edges; too many to expand")]
    TooManyNullable { production: String, count: usize },
    #[error(transparent)]
    Replacement(#[from] HypergraphError),
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Empty iff every production is in normal form.
pub fn is_cnf(g: &Grammar) -> Vec<CnfViolation> {
    let start_in_rhs = g.occurs_in_rhs(g.start.as_str());
    let mut out = Vec::new();
    for p in &g.productions {
        let edges = p.rhs.edge_count();
        let nonterminal_edges = p
            .rhs
            .edges()
            .iter()
            .filter(|e| g.is_nonterminal(e.label.as_str()))
            .count();
        let internal = p.rhs.internal_node_count();
        let ok = match (edges, nonterminal_edges) {
            (2, 2) | (1, 0) => true,
            (0, _) if internal > 0 => true,
            (0, _) => {
                if p.lhs != g.start {
                    out.push(CnfViolation::EmptyNotStart {
                        production: p.name.clone(),
                    });
                } else if start_in_rhs {
                    out.push(CnfViolation::StartEmptyButStartInRhs {
                        production: p.name.clone(),
                    });
                }
                continue;
            }
            _ => false,
        };
        if !ok {
            out.push(CnfViolation::Shape {
                production: p.name.clone(),
                edges,
                nonterminal_edges,
                internal,
            });
        }
    }
    out
}

/// One shorthand per production, in declaration order.
pub fn shorthand(g: &Grammar) -> Result<Vec<Shorthand>, CnfError> {
    let violations = is_cnf(g);
    if !violations.is_empty() {
        return Err(CnfError::NotCnf(violations));
    }
    Ok(g.productions
        .iter()
        .map(|p| {
            let kind = match p.rhs.edge_count() {
                0 => ShorthandKind::Lambda,
                1 => ShorthandKind::Terminal(p.rhs.edges()[0].label.clone()),
                _ => {
                    let [a, b] = p.edges_by_mark()[..] else { unreachable!() };
                    ShorthandKind::NonTerminal(
                        p.rhs.edges()[a.0].label.clone(),
                        p.rhs.edges()[b.0].label.clone(),
                    )
                }
            };
            Shorthand {
                name: p.name.clone(),
                lhs: p.lhs.clone(),
                kind,
                internal: p.rhs.internal_node_count(),
            }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct CnfOutcome {
    pub grammar: Grammar,
    /// The input was already in normal form and is returned unchanged.
    pub already_cnf: bool,
    /// One line per applied rewrite.
    pub trace: Vec<String>,
    /// Conditions that stopped or limited the transformation.
    pub diagnostics: Vec<String>,
}

/// Unit-pass iterations allowed per production of the input.
const UNIT_STEPS_PER_PRODUCTION: usize = 256;
/// Largest number of nullable edges in one rhs that is expanded into subsets.
const MAX_NULLABLE_EDGES: usize = 12;

/// Transforms `g` into an equivalent grammar in normal form.
///
/// If the start symbol generates nothing, the grammar is returned unchanged
/// with a diagnostic.
pub fn to_cnf(g: &Grammar) -> Result<CnfOutcome, CnfError> {
    let violations = validate_grammar(g);
    if !violations.is_empty() {
        return Err(CnfError::Invalid(violations));
    }
    if is_cnf(g).is_empty() {
        return Ok(CnfOutcome {
            grammar: g.clone(),
            already_cnf: true,
            trace: Vec::new(),
            diagnostics: Vec::new(),
        });
    }
    let mut w = Work::new(g);
    if !w.productive().contains(&w.start) {
        return Ok(CnfOutcome {
            grammar: g.clone(),
            already_cnf: false,
            trace: Vec::new(),
            diagnostics: vec![format!(
                "start symbol `{}` derives no terminal graph; grammar returned unchanged",
                g.start
            )],
        });
    }
    w.drop_useless();
    w.empty_productions()?;
    w.unit_productions()?;
    w.split_long()?;
    w.outline_terminals();
    w.drop_useless();
    let (grammar, trace) = w.finish();
    let remaining = is_cnf(&grammar);
    if !remaining.is_empty() {
        return Err(CnfError::NotCnf(remaining));
    }
    Ok(CnfOutcome {
        grammar,
        already_cnf: false,
        trace,
        diagnostics: Vec::new(),
    })
}

struct Work {
    typing: Typing,
    nonterminals: Vec<Symbol>,
    terminals: Vec<Symbol>,
    start: Symbol,
    prods: Vec<Production>,
    names: HashSet<String>,
    symbols: HashSet<String>,
    next_fresh: usize,
    trace: Vec<String>,
}

impl Work {
    fn new(g: &Grammar) -> Self {
        Work {
            typing: g.typing.clone(),
            nonterminals: g.nonterminals.clone(),
            terminals: g.terminals.clone(),
            start: g.start.clone(),
            prods: g.productions.clone(),
            names: g.productions.iter().map(|p| p.name.clone()).collect(),
            symbols: g
                .nonterminals
                .iter()
                .chain(&g.terminals)
                .map(|s| s.to_string())
                .chain(g.typing.iter().map(|(s, _)| s.to_string()))
                .collect(),
            next_fresh: 1,
            trace: Vec::new(),
        }
    }

    fn finish(self) -> (Grammar, Vec<String>) {
        let g = Grammar {
            typing: self.typing,
            nonterminals: self.nonterminals,
            terminals: self.terminals,
            start: self.start,
            productions: self.prods,
        };
        (g, self.trace)
    }

    fn is_nt(&self, label: &Symbol) -> bool {
        self.nonterminals.contains(label)
    }

    fn nt_edges(&self, p: &Production) -> Vec<EdgeId> {
        p.rhs
            .edge_ids()
            .filter(|e| self.is_nt(&p.rhs.edges()[e.0].label))
            .collect()
    }

    fn fresh_nonterminal(&mut self, arity: usize) -> Symbol {
        loop {
            let name = format!("_T{}", self.next_fresh);
            self.next_fresh += 1;
            if self.symbols.insert(name.clone()) {
                let s = Symbol::from(name);
                self.typing.insert(s.clone(), arity);
                self.nonterminals.push(s.clone());
                return s;
            }
        }
    }

    fn fresh_name(&mut self, base: String) -> String {
        if self.names.insert(base.clone()) {
            return base;
        }
        (2..)
            .map(|k| format!("{base}#{k}"))
            .find(|n| self.names.insert(n.clone()))
            .unwrap()
    }

    fn key(p: &Production) -> Option<(Symbol, CanonicalForm)> {
        canonical_form(&p.rhs).ok().map(|f| (p.lhs.clone(), f))
    }

    /// Drops productions that repeat an earlier one up to isomorphism.
    fn dedup(&mut self) {
        let mut seen = HashSet::new();
        let before = self.prods.len();
        let mut dropped = Vec::new();
        self.prods.retain(|p| {
            let fresh = Self::key(p).is_none_or(|k| seen.insert(k));
            if !fresh {
                dropped.push(p.name.clone());
            }
            fresh
        });
        if self.prods.len() != before {
            self.trace.push(format!("dropped duplicate productions {}", dropped.join(", ")));
        }
    }

    fn productive(&self) -> BTreeSet<Symbol> {
        let mut productive = BTreeSet::new();
        loop {
            let before = productive.len();
            for p in &self.prods {
                if productive.contains(&p.lhs) {
                    continue;
                }
                if p
                    .rhs
                    .edges()
                    .iter()
                    .all(|e| !self.is_nt(&e.label) || productive.contains(&e.label))
                {
                    productive.insert(p.lhs.clone());
                }
            }
            if productive.len() == before {
                return productive;
            }
        }
    }

    fn reachable(&self) -> BTreeSet<Symbol> {
        let mut reached = BTreeSet::from([self.start.clone()]);
        let mut stack = vec![self.start.clone()];
        while let Some(a) = stack.pop() {
            for p in self.prods.iter().filter(|p| p.lhs == a) {
                for e in p.rhs.edges() {
                    if self.is_nt(&e.label) && reached.insert(e.label.clone()) {
                        stack.push(e.label.clone());
                    }
                }
            }
        }
        reached
    }

    /// Removes productions that mention unproductive nonterminals or whose
    /// lhs is unreachable, then the nonterminals left without productions.
    fn drop_useless(&mut self) {
        let productive = self.productive();
        let before: Vec<String> = self.prods.iter().map(|p| p.name.clone()).collect();
        let is_nt = |l: &Symbol, nts: &[Symbol]| nts.contains(l);
        let nts = self.nonterminals.clone();
        self.prods.retain(|p| {
            productive.contains(&p.lhs)
                && p
                    .rhs
                    .edges()
                    .iter()
                    .all(|e| !is_nt(&e.label, &nts) || productive.contains(&e.label))
        });
        let reachable = self.reachable();
        self.prods.retain(|p| reachable.contains(&p.lhs));
        let kept: HashSet<&str> = self.prods.iter().map(|p| p.name.as_str()).collect();
        let removed: Vec<&String> = before.iter().filter(|n| !kept.contains(n.as_str())).collect();
        if !removed.is_empty() {
            self.trace.push(format!(
                "removed useless productions {}",
                removed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            ));
        }
        let used: BTreeSet<Symbol> = self.prods.iter().map(|p| p.lhs.clone()).collect();
        let start = self.start.clone();
        let dropped: Vec<Symbol> = self
            .nonterminals
            .iter()
            .filter(|n| !used.contains(*n) && **n != start)
            .cloned()
            .collect();
        for n in &dropped {
            self.typing.remove(n.as_str());
        }
        self.nonterminals.retain(|n| !dropped.contains(n));
    }

    fn nullable(&self) -> BTreeSet<Symbol> {
        let mut nullable = BTreeSet::new();
        loop {
            let before = nullable.len();
            for p in &self.prods {
                if p.rhs.internal_node_count() == 0
                    && p.rhs.edges().iter().all(|e| nullable.contains(&e.label))
                {
                    nullable.insert(p.lhs.clone());
                }
            }
            if nullable.len() == before {
                return nullable;
            }
        }
    }

    fn occurs_in_rhs(&self, label: &Symbol) -> bool {
        self.prods
            .iter()
            .any(|p| p.rhs.edges().iter().any(|e| &e.label == label))
    }

    fn introduce_fresh_start(&mut self) {
        let arity = self.typing.arity(self.start.as_str()).unwrap();
        let mut name = "_S0".to_string();
        let mut k = 0;
        while self.symbols.contains(&name) {
            k += 1;
            name = format!("_S0_{k}");
        }
        self.symbols.insert(name.clone());
        let fresh = Symbol::from(name);
        self.typing.insert(fresh.clone(), arity);
        self.nonterminals.insert(0, fresh.clone());
        let pname = self.fresh_name(format!("{fresh}"));
        let rhs = Hypergraph::handle_with_arity(self.start.clone(), arity);
        self.prods.insert(0, Production::in_edge_order(pname, fresh.clone(), rhs));
        self.trace.push(format!(
            "start symbol `{}` is nullable and occurs in a rhs; new start `{fresh}`",
            self.start
        ));
        self.start = fresh;
    }

    /// Removes every empty production except a start-empty one whose start
    /// symbol occurs in no rhs.
    fn empty_productions(&mut self) -> Result<(), CnfError> {
        if self.nullable().contains(&self.start) && self.occurs_in_rhs(&self.start) {
            self.introduce_fresh_start();
        }
        while let Some(idx) = self
            .prods
            .iter()
            .position(|p| p.is_empty_production() && p.lhs != self.start)
        {
            let a = self.prods[idx].lhs.clone();
            let recursive = self
                .prods
                .iter()
                .any(|p| p.lhs == a && p.rhs.edges().iter().any(|e| e.label == a));
            if recursive {
                self.delete_nullable_edges()?;
                break;
            }
            self.inline_everywhere(&a)?;
            self.dedup();
        }
        Ok(())
    }

    /// Replaces every `a`-edge by every production of `a`, in all
    /// combinations, then removes `a`. Requires `a` not to occur in its own
    /// productions.
    fn inline_everywhere(&mut self, a: &Symbol) -> Result<(), CnfError> {
        let (own, others): (Vec<Production>, Vec<Production>) =
            std::mem::take(&mut self.prods).into_iter().partition(|p| &p.lhs == a);
        let mut out = Vec::with_capacity(others.len());
        let mut touched = Vec::new();
        for q in others {
            let slots: Vec<EdgeId> = q.rhs.edge_ids().filter(|e| &q.rhs.edges()[e.0].label == a).collect();
            if slots.is_empty() {
                out.push(q);
                continue;
            }
            touched.push(q.name.clone());
            for choice in odometer(slots.len(), own.len()) {
                let assignment: Vec<(EdgeId, &Hypergraph, &[usize])> = slots
                    .iter()
                    .zip(&choice)
                    .map(|(&e, &c)| (e, &own[c].rhs, own[c].marks.as_slice()))
                    .collect();
                let (rhs, marks) = substitute_marked(&q.rhs, &q.marks, &assignment)?;
                let picked: Vec<&str> = choice.iter().map(|&c| own[c].name.as_str()).collect();
                let name = self.fresh_name(format!("{}[{}]", q.name, picked.join(",")));
                out.push(Production::new(name, q.lhs.clone(), rhs, marks));
            }
        }
        self.prods = out;
        self.nonterminals.retain(|n| n != a);
        self.typing.remove(a.as_str());
        self.trace.push(format!(
            "inlined `{a}` ({}) into {}",
            own.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", "),
            if touched.is_empty() { "no production".to_string() } else { touched.join(", ") }
        ));
        Ok(())
    }

    /// Classical nullable elimination: adds every variant of a production with
    /// a nonempty subset of its nullable edges deleted, then drops the empty
    /// productions. Used when an empty production's lhs is recursive.
    fn delete_nullable_edges(&mut self) -> Result<(), CnfError> {
        let nullable = self.nullable();
        let mut out = Vec::new();
        for q in std::mem::take(&mut self.prods) {
            let slots: Vec<EdgeId> = q
                .rhs
                .edge_ids()
                .filter(|e| nullable.contains(&q.rhs.edges()[e.0].label))
                .collect();
            if slots.len() > MAX_NULLABLE_EDGES {
                return Err(CnfError::TooManyNullable {
                    production: q.name.clone(),
                    count: slots.len(),
                });
            }
            for mask in 1u32..(1 << slots.len()) {
                let deleted: Vec<EdgeId> = (0..slots.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| slots[i])
                    .collect();
                let keep: Vec<EdgeId> = q.rhs.edge_ids().filter(|e| !deleted.contains(e)).collect();
                let rhs = q.rhs.with_edges(&keep);
                let marks = ranks_of(&keep.iter().map(|e| q.marks[e.0]).collect::<Vec<_>>());
                let tag: Vec<String> = deleted.iter().map(|e| q.marks[e.0].to_string()).collect();
                let name = self.fresh_name(format!("{}~{}", q.name, tag.join(",")));
                out.push(Production::new(name, q.lhs.clone(), rhs, marks));
            }
            out.push(q);
        }
        let start = self.start.clone();
        out.retain(|p| !(p.is_empty_production() && p.lhs != start));
        self.prods = out;
        self.trace.push(format!(
            "deleted nullable edges of {}",
            nullable.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ));
        self.dedup();
        Ok(())
    }

    /// Replaces `A -> B` productions by `A -> rhs` for every production of `B`,
    /// until none is left.
    fn unit_productions(&mut self) -> Result<(), CnfError> {
        let mut done: HashSet<(Symbol, CanonicalForm)> = HashSet::new();
        let budget = UNIT_STEPS_PER_PRODUCTION * self.prods.len().max(1);
        for _ in 0..budget {
            let Some(idx) = self.prods.iter().position(|p| self.is_unit(p)) else {
                return Ok(());
            };
            let p = self.prods.remove(idx);
            if let Some(k) = Self::key(&p) {
                done.insert(k);
            }
            let e = p.rhs.edge_ids().next().unwrap();
            let b = p.rhs.edges()[0].label.clone();
            if b == p.lhs && is_identity(&p.rhs) {
                self.trace.push(format!("dropped identity production {}", p.name));
                continue;
            }
            if b == p.lhs && p.rhs.internal_node_count() > 0 {
                // Each round adds nodes, so no finite set of productions replaces it.
                return Err(CnfError::UnitCycle(b));
            }
            let mut inner: Vec<Production> = self.prods.iter().filter(|q| q.lhs == b).cloned().collect();
            if b == p.lhs {
                // A permutation of the attachments: close under repeated use.
                inner.push(p.clone());
            }
            let mut added = Vec::new();
            for q in inner {
                let rhs = p.rhs.replace(e, &q.rhs)?;
                let candidate = Production::new(String::new(), p.lhs.clone(), rhs, q.marks.clone());
                let key = Self::key(&candidate);
                if let Some(k) = &key {
                    if done.contains(k) || self.prods.iter().any(|r| Self::key(r).as_ref() == Some(k)) {
                        continue;
                    }
                }
                let name = self.fresh_name(format!("{}[{}]", p.name, q.name));
                added.push(name.clone());
                self.prods.push(Production { name, ..candidate });
            }
            self.trace.push(format!(
                "replaced unit production {} by {}",
                p.name,
                if added.is_empty() { "nothing new".to_string() } else { added.join(", ") }
            ));
        }
        let culprit = self
            .prods
            .iter()
            .find(|p| self.is_unit(p))
            .map(|p| p.lhs.clone())
            .unwrap_or_else(|| self.start.clone());
        Err(CnfError::UnitCycle(culprit))
    }

    fn is_unit(&self, p: &Production) -> bool {
        p.rhs.edge_count() == 1 && self.is_nt(&p.rhs.edges()[0].label)
    }

    /// Splits every rhs with more than two edges into its rank-1 edge and a
    /// fresh nonterminal standing for the rest.
    fn split_long(&mut self) -> Result<(), CnfError> {
        let mut reuse: HashMap<CanonicalForm, Symbol> = HashMap::new();
        let mut i = 0;
        while i < self.prods.len() {
            if self.prods[i].rhs.edge_count() <= 2 {
                i += 1;
                continue;
            }
            let p = self.prods[i].clone();
            let order = p.edges_by_mark();
            let first = order[0];
            let rest = &order[1..];
            // External nodes of the fresh symbol: attachments of the moved
            // edges, first occurrence first.
            let mut ext: Vec<NodeId> = Vec::new();
            for e in rest {
                for &v in &p.rhs.edges()[e.0].att {
                    if !ext.contains(&v) {
                        ext.push(v);
                    }
                }
            }
            let local: HashMap<NodeId, NodeId> =
                ext.iter().enumerate().map(|(i, &v)| (v, NodeId(i))).collect();
            let moved: Vec<Edge> = rest
                .iter()
                .map(|e| {
                    let edge = &p.rhs.edges()[e.0];
                    Edge::new(edge.label.clone(), edge.att.iter().map(|v| local[v]).collect())
                })
                .collect();
            let part = Hypergraph::new(ext.len(), moved, (0..ext.len()).map(NodeId).collect());
            let part_marks = ranks_of(&rest.iter().map(|e| p.marks[e.0]).collect::<Vec<_>>());
            let form = canonical_form(&part).ok();
            let (t, fresh) = match form.as_ref().and_then(|f| reuse.get(f)) {
                Some(t) => (t.clone(), false),
                None => {
                    let t = self.fresh_nonterminal(ext.len());
                    if let Some(f) = form {
                        reuse.insert(f, t.clone());
                    }
                    (t, true)
                }
            };
            if fresh {
                let name = self.fresh_name(t.to_string());
                self.prods.push(Production::new(name, t.clone(), part, part_marks));
            }
            let kept = p.rhs.edges()[first.0].clone();
            let rhs = Hypergraph::new(p.rhs.node_count(), vec![kept, Edge::new(t.clone(), ext)], p.rhs.ext().to_vec());
            self.trace.push(format!(
                "split {}: rank-1 edge kept, {} edges moved to `{t}`",
                p.name,
                rest.len()
            ));
            self.prods[i] = Production::new(p.name, p.lhs, rhs, vec![1, 2]);
            i += 1;
        }
        Ok(())
    }

    /// In two-edge productions, replaces each terminal edge `a` by a fresh
    /// nonterminal whose only production is the handle of `a`.
    fn outline_terminals(&mut self) {
        let mut outlined: HashMap<Symbol, Symbol> = HashMap::new();
        for i in 0..self.prods.len() {
            if self.prods[i].rhs.edge_count() != 2 || self.nt_edges(&self.prods[i]).len() == 2 {
                continue;
            }
            let mut rhs = self.prods[i].rhs.clone();
            for e in rhs.edge_ids().collect::<Vec<_>>() {
                let label = rhs.edges()[e.0].label.clone();
                if self.is_nt(&label) {
                    continue;
                }
                let t = match outlined.get(&label) {
                    Some(t) => t.clone(),
                    None => {
                        let arity = rhs.edges()[e.0].att.len();
                        let t = self.fresh_nonterminal(arity);
                        let name = self.fresh_name(t.to_string());
                        let handle = Hypergraph::handle_with_arity(label.clone(), arity);
                        self.prods.push(Production::in_edge_order(name, t.clone(), handle));
                        self.trace.push(format!("outlined terminal `{label}` as `{t}`"));
                        outlined.insert(label, t.clone());
                        t
                    }
                };
                rhs = rhs.relabel(e, t).expect("edge exists");
            }
            self.prods[i].rhs = rhs;
        }
    }
}

/// `A -> A•` with the attachments in external order.
fn is_identity(rhs: &Hypergraph) -> bool {
    rhs.internal_node_count() == 0 && rhs.edges()[0].att == rhs.ext()
}

/// All vectors of length `len` over `0..base`, in lexicographic order.
fn odometer(len: usize, base: usize) -> Vec<Vec<usize>> {
    if base == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; len];
    loop {
        out.push(cur.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < base {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests;
