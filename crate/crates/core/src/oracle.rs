//! Exhaustive enumeration at small sizes. Nothing here reads count tables:
//! this is the ground truth the counting and sampling code is tested against.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::cnf::is_cnf;
use crate::counting::CountTables;
use crate::grammar::{yield_of, DerivationError, DerivationTree, Grammar};
use crate::hypergraph::{canonical_form, CanonicalForm, Hypergraph, HypergraphError};
use crate::symbol::Symbol;

/// Default bound on the graph size the oracle will enumerate.
pub const DEFAULT_CAP: usize = 14;
/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "HRGEN_ORACLE_CAP";

/// The cap from `HRGEN_ORACLE_CAP`, else [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("grammar is not in normal form")]
    NotCnf,
    #[error("`{0}` is not a nonterminal")]
    UnknownNonterminal(String),
    #[error("size {n} exceeds the oracle cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("sentential forms grew past {limit} edges without reaching the target size; the grammar has size-neutral cycles")]
    Unbounded { limit: usize },
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

enum Shape {
    Leaf,
    Binary { b: Symbol, c: Symbol },
}

/// Persistent tree used while enumerating, so subtrees are shared.
struct Node {
    production: usize,
    children: Option<(Rc<Node>, Rc<Node>)>,
}

/// Memoized derivation-tree enumeration for a normal-form grammar.
pub struct Enumerator<'g> {
    g: &'g Grammar,
    cap: usize,
    /// Per production: lhs, own size contribution, shape.
    rules: Vec<(Symbol, usize, Shape)>,
    memo: HashMap<(Symbol, usize), Rc<Vec<Rc<Node>>>>,
}

impl<'g> Enumerator<'g> {
    pub fn new(g: &'g Grammar, cap: usize) -> Result<Self, OracleError> {
        if !is_cnf(g).is_empty() {
            return Err(OracleError::NotCnf);
        }
        let rules = g
            .productions
            .iter()
            .map(|p| {
                let nts = p.nonterminal_edges(g);
                let arity = g.arity(p.lhs.as_str()).unwrap_or(0);
                // Yield size = own + sum over children of (child size - child type).
                let own = p.rhs.size() - nts.len() - arity;
                let shape = match nts[..] {
                    [first, second] => Shape::Binary {
                        b: p.rhs.edges()[first.0].label.clone(),
                        c: p.rhs.edges()[second.0].label.clone(),
                    },
                    _ => Shape::Leaf,
                };
                (p.lhs.clone(), own, shape)
            })
            .collect();
        Ok(Enumerator {
            g,
            cap,
            rules,
            memo: HashMap::new(),
        })
    }

    fn arity(&self, a: &str) -> Result<usize, OracleError> {
        if !self.g.is_nonterminal(a) {
            return Err(OracleError::UnknownNonterminal(a.to_string()));
        }
        Ok(self.g.arity(a).unwrap_or(0))
    }

    /// Number of trees rooted at `a` whose yield has size `n`.
    pub fn count(&mut self, a: &str, n: usize) -> Result<usize, OracleError> {
        let arity = self.arity(a)?;
        self.check_cap(n)?;
        Ok(match n.checked_sub(arity) {
            Some(offset) => self.trees(&Symbol::new(a), offset).len(),
            None => 0,
        })
    }

    /// All trees rooted at `a` whose yield has size `n`, in a fixed order.
    pub fn enumerate(&mut self, a: &str, n: usize) -> Result<Vec<DerivationTree>, OracleError> {
        let arity = self.arity(a)?;
        self.check_cap(n)?;
        let Some(offset) = n.checked_sub(arity) else {
            return Ok(Vec::new());
        };
        let trees = self.trees(&Symbol::new(a), offset);
        Ok(trees.iter().map(|t| self.export(t)).collect())
    }

    fn check_cap(&self, n: usize) -> Result<(), OracleError> {
        if n > self.cap {
            return Err(OracleError::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    fn export(&self, t: &Node) -> DerivationTree {
        let name = self.g.productions[t.production].name.clone();
        match &t.children {
            None => DerivationTree::leaf(name),
            Some((l, r)) => DerivationTree::node(name, vec![self.export(l), self.export(r)]),
        }
    }

    /// Trees rooted at `a` with yield size `offset + type(a)`.
    fn trees(&mut self, a: &Symbol, offset: usize) -> Rc<Vec<Rc<Node>>> {
        if let Some(t) = self.memo.get(&(a.clone(), offset)) {
            return t.clone();
        }
        let mut out = Vec::new();
        for p in 0..self.rules.len() {
            let (lhs, own, shape) = &self.rules[p];
            if lhs != a || *own > offset {
                continue;
            }
            let rest = offset - own;
            match shape {
                Shape::Leaf => {
                    if rest == 0 {
                        out.push(Rc::new(Node {
                            production: p,
                            children: None,
                        }));
                    }
                }
                Shape::Binary { b, c } => {
                    let (b, c) = (b.clone(), c.clone());
                    // Children of a normal-form production are never empty.
                    for k in 1..rest {
                        let left = self.trees(&b, k);
                        if left.is_empty() {
                            continue;
                        }
                        let right = self.trees(&c, rest - k);
                        for l in left.iter() {
                            for r in right.iter() {
                                out.push(Rc::new(Node {
                                    production: p,
                                    children: Some((l.clone(), r.clone())),
                                }));
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert((a.clone(), offset), out.clone());
        out
    }
}

/// All derivation trees of size-`n` graphs rooted at `a`, with the default cap.
pub fn enumerate_trees(g: &Grammar, a: &str, n: usize) -> Result<Vec<DerivationTree>, OracleError> {
    Enumerator::new(g, default_cap())?.enumerate(a, n)
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub multiplicity: usize,
    pub witness: DerivationTree,
    /// A second tree with the same yield, if there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_witness: Option<DerivationTree>,
}

/// The distinct graphs of a slice, keyed by canonical form.
#[derive(Clone, Debug, Serialize)]
pub struct SliceCensus {
    pub symbol: String,
    pub size: usize,
    pub total_trees: usize,
    pub total_graphs: usize,
    #[serde(serialize_with = "hex_keys")]
    pub entries: BTreeMap<CanonicalForm, CensusEntry>,
}

fn hex_keys<S: serde::Serializer>(
    entries: &BTreeMap<CanonicalForm, CensusEntry>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(entries.len()))?;
    for (k, v) in entries {
        map.serialize_entry(&k.to_hex(), v)?;
    }
    map.end()
}

impl SliceCensus {
    pub fn is_unambiguous(&self) -> bool {
        self.total_trees == self.total_graphs
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("census serializes");
        s.push('\n');
        s
    }
}

/// Enumerates the trees of `(a, n)` and groups their yields by isomorphism.
pub fn census(g: &Grammar, a: &str, n: usize) -> Result<SliceCensus, OracleError> {
    census_with_cap(g, a, n, default_cap())
}

pub fn census_with_cap(g: &Grammar, a: &str, n: usize, cap: usize) -> Result<SliceCensus, OracleError> {
    let trees = Enumerator::new(g, cap)?.enumerate(a, n)?;
    let total_trees = trees.len();
    let mut entries: BTreeMap<CanonicalForm, CensusEntry> = BTreeMap::new();
    for t in trees {
        let form = canonical_form(&yield_of(g, &t)?)?;
        match entries.get_mut(&form) {
            Some(e) => {
                e.multiplicity += 1;
                if e.second_witness.is_none() {
                    e.second_witness = Some(t);
                }
            }
            None => {
                entries.insert(
                    form,
                    CensusEntry {
                        multiplicity: 1,
                        witness: t,
                        second_witness: None,
                    },
                );
            }
        }
    }
    Ok(SliceCensus {
        symbol: a.to_string(),
        size: n,
        total_trees,
        total_graphs: entries.len(),
        entries,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Ambiguity {
    Unambiguous { size: usize },
    Ambiguous {
        size: usize,
        #[serde(serialize_with = "hex_form")]
        form: CanonicalForm,
        first: DerivationTree,
        second: DerivationTree,
    },
}

fn hex_form<S: serde::Serializer>(f: &CanonicalForm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_hex())
}

impl Ambiguity {
    pub fn is_ambiguous(&self) -> bool {
        matches!(self, Ambiguity::Ambiguous { .. })
    }
}

/// Whether two distinct trees of the start symbol yield isomorphic size-`n`
/// graphs, with a witness pair if so.
pub fn check_n_ambiguity(g: &Grammar, n: usize) -> Result<Ambiguity, OracleError> {
    check_n_ambiguity_with_cap(g, n, default_cap())
}

pub fn check_n_ambiguity_with_cap(g: &Grammar, n: usize, cap: usize) -> Result<Ambiguity, OracleError> {
    let c = census_with_cap(g, g.start.as_str(), n, cap)?;
    for (form, e) in c.entries {
        if let Some(second) = e.second_witness {
            return Ok(Ambiguity::Ambiguous {
                size: n,
                form,
                first: e.witness,
                second,
            });
        }
    }
    Ok(Ambiguity::Unambiguous { size: n })
}

/// Tables of tree counts for every nonterminal and production at offsets
/// `0..=n_max`, computed by enumeration. Cells whose graph size exceeds `cap`
/// are an error.
pub fn oracle_tables(g: &Grammar, n_max: usize, cap: usize) -> Result<CountTables, OracleError> {
    let mut en = Enumerator::new(g, cap)?;
    let max_arity = g
        .nonterminals
        .iter()
        .map(|s| g.arity(s.as_str()).unwrap_or(0))
        .max()
        .unwrap_or(0);
    en.check_cap(n_max + max_arity)?;
    let mut m1 = BTreeMap::new();
    let mut m2: BTreeMap<String, Vec<BigUint>> = g
        .productions
        .iter()
        .map(|p| (p.name.clone(), vec![BigUint::default(); n_max + 1]))
        .collect();
    for a in &g.nonterminals {
        let mut row = Vec::with_capacity(n_max + 1);
        for l in 0..=n_max {
            let trees = en.trees(a, l);
            row.push(BigUint::from(trees.len()));
            for t in trees.iter() {
                m2.get_mut(&g.productions[t.production].name).unwrap()[l] += 1u32;
            }
        }
        m1.insert(a.clone(), row);
    }
    Ok(CountTables::from_rows(n_max, m1, m2).expect("rows have uniform length"))
}

/// Canonical forms of all terminal graphs of size `n` derivable from the
/// start symbol, for any grammar (not only normal form).
///
/// Explores sentential forms up to isomorphism, always expanding the first
/// nonterminal edge, and prunes a form once the least size any of its
/// completions can have exceeds `n`.
pub fn language_slice(g: &Grammar, n: usize) -> Result<HashSet<CanonicalForm>, OracleError> {
    let min = min_offsets(g);
    let arity = g.arity(g.start.as_str()).unwrap_or(0);
    let limit = 2 * n + 2;
    let lower_bound = |h: &Hypergraph| -> Option<usize> {
        let mut lb = h.node_count();
        for e in h.edges() {
            if g.is_nonterminal(e.label.as_str()) {
                lb += (*min.get(&e.label)?)?;
            } else {
                lb += 1;
            }
        }
        Some(lb)
    };
    let start = Hypergraph::handle_with_arity(g.start.clone(), arity);
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut out = HashSet::new();
    let mut work = vec![start];
    while let Some(h) = work.pop() {
        let Some(slot) = h.edge_ids().find(|e| g.is_nonterminal(h.edges()[e.0].label.as_str())) else {
            if h.size() == n {
                out.insert(canonical_form(&h)?);
            }
            continue;
        };
        let label = &h.edges()[slot.0].label;
        for p in g.productions_for(label.as_str()) {
            let next = h.replace(slot, &p.rhs)?;
            match lower_bound(&next) {
                Some(lb) if lb <= n => {}
                _ => continue,
            }
            if next.edge_count() > limit {
                return Err(OracleError::Unbounded { limit });
            }
            if seen.insert(canonical_form(&next)?) {
                work.push(next);
            }
        }
    }
    Ok(out)
}

/// Least `size - type` over the terminal graphs each nonterminal derives;
/// `None` for nonterminals that derive nothing.
fn min_offsets(g: &Grammar) -> HashMap<Symbol, Option<usize>> {
    let mut min: HashMap<Symbol, Option<usize>> = g.nonterminals.iter().map(|s| (s.clone(), None)).collect();
    loop {
        let mut changed = false;
        for p in &g.productions {
            let arity = g.arity(p.lhs.as_str()).unwrap_or(0);
            let mut total = Some(p.rhs.node_count() - arity);
            for e in p.rhs.edges() {
                let add = if g.is_nonterminal(e.label.as_str()) {
                    min.get(&e.label).copied().flatten()
                } else {
                    Some(1)
                };
                total = total.zip(add).map(|(a, b)| a + b);
            }
            if let Some(t) = total {
                let cur = min.get_mut(&p.lhs).unwrap();
                if cur.is_none_or(|c| t < c) {
                    *cur = Some(t);
                    changed = true;
                }
            }
        }
        if !changed {
            return min;
        }
    }
}
