//! Uniform generation: draws a derivation with probability proportional to
//! the derivation counts, so every derivation tree of the requested size is
//! equally likely. For a grammar that is unambiguous at that size this is the
//! uniform distribution over the graphs of the slice.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::cnf::is_cnf;
use crate::counting::CountTables;
use crate::grammar::{DerivationTree, Grammar};
use crate::hypergraph::{Edge, Hypergraph, NodeId};
use crate::symbol::Symbol;

/// Seedable ChaCha8 stream. `substream(seed, i)` selects ChaCha stream `i`
/// under key `seed`, so sample `i` is reproducible on its own.
#[derive(Clone, Debug)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomSource { rng }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    /// Uniform in `[0, bound)` by rejection. Panics if `bound` is zero.
    pub fn uniform_below(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "uniform_below(0)");
        if let Some(b) = bound.to_u64() {
            return BigUint::from(self.below_u64(b));
        }
        let bits = bound.bits();
        let words = bits.div_ceil(32) as usize;
        let top_bits = bits - 32 * (words as u64 - 1);
        let mask = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
        let mut digits = vec![0u32; words];
        loop {
            for d in digits.iter_mut() {
                *d = self.rng.next_u32();
            }
            digits[words - 1] &= mask;
            let x = BigUint::from_slice(&digits);
            if &x < bound {
                return x;
            }
        }
    }

    fn below_u64(&mut self, bound: u64) -> u64 {
        let mask = u64::MAX >> (bound - 1).leading_zeros().min(63);
        let mask = if bound == 1 { 0 } else { mask };
        loop {
            let x = self.rng.next_u64() & mask;
            if x < bound {
                return x;
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("grammar is not in normal form")]
    NotCnf,
    #[error("`{0}` is not a nonterminal")]
    UnknownNonterminal(String),
    #[error("size {n} is below the type {arity} of `{symbol}`")]
    OutOfRange { symbol: String, n: usize, arity: usize },
    #[error("tables reach offset {n_max} but offset {needed} is required")]
    TablesTooSmall { n_max: usize, needed: usize },
    #[error("tables have no entry for `{0}`")]
    MissingRow(String),
    #[error("no graph of size {n} derives from `{symbol}`")]
    EmptySlice { symbol: String, n: usize },
    #[error("count tables are inconsistent at `{at}` offset {offset}: {detail}")]
    InconsistentTables { at: String, offset: usize, detail: String },
}

/// One step of a generation: pre-order index, production, split (if binary).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Choice {
    pub step: usize,
    pub production: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub graph: Hypergraph,
    pub tree: DerivationTree,
    pub choices: Vec<Choice>,
}

enum Kind {
    Terminal,
    Lambda,
    /// Nonterminal indices and edge indices of the rank-1 and rank-2 edges.
    Binary { b: usize, c: usize, first: usize, second: usize },
}

struct Rule<'g> {
    name: &'g str,
    rhs: &'g Hypergraph,
    kind: Kind,
    internal: usize,
    m2: &'g [BigUint],
}

struct Nonterminal<'g> {
    symbol: &'g Symbol,
    arity: usize,
    rules: Vec<usize>,
    m1: &'g [BigUint],
}

/// A normal-form grammar paired with its count tables, ready to sample.
pub struct Sampler<'g> {
    rules: Vec<Rule<'g>>,
    nts: Vec<Nonterminal<'g>>,
    index: HashMap<&'g str, usize>,
    n_max: usize,
}

impl<'g> Sampler<'g> {
    pub fn new(g: &'g Grammar, tables: &'g CountTables) -> Result<Self, SampleError> {
        if !is_cnf(g).is_empty() {
            return Err(SampleError::NotCnf);
        }
        let index: HashMap<&str, usize> = g
            .nonterminals
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut nts = Vec::with_capacity(g.nonterminals.len());
        for s in &g.nonterminals {
            nts.push(Nonterminal {
                symbol: s,
                arity: g.arity(s.as_str()).unwrap_or(0),
                rules: Vec::new(),
                m1: tables
                    .m1_row(s.as_str())
                    .ok_or_else(|| SampleError::MissingRow(s.to_string()))?,
            });
        }
        let mut rules = Vec::with_capacity(g.productions.len());
        for p in &g.productions {
            let kind = match p.rhs.edge_count() {
                0 => Kind::Lambda,
                1 => Kind::Terminal,
                _ => {
                    let order = p.edges_by_mark();
                    let label = |i: usize| index[p.rhs.edges()[order[i].0].label.as_str()];
                    Kind::Binary {
                        b: label(0),
                        c: label(1),
                        first: order[0].0,
                        second: order[1].0,
                    }
                }
            };
            nts[index[p.lhs.as_str()]].rules.push(rules.len());
            rules.push(Rule {
                name: &p.name,
                rhs: &p.rhs,
                kind,
                internal: p.rhs.internal_node_count(),
                m2: tables
                    .m2_row(&p.name)
                    .ok_or_else(|| SampleError::MissingRow(p.name.clone()))?,
            });
        }
        Ok(Sampler {
            rules,
            nts,
            index,
            n_max: tables.n_max(),
        })
    }

    /// Number of derivation trees of size `n` rooted at `a`.
    pub fn slice_count(&self, a: &str, n: usize) -> Result<&BigUint, SampleError> {
        let (nt, offset) = self.target(a, n)?;
        Ok(&self.nts[nt].m1[offset])
    }

    fn target(&self, a: &str, n: usize) -> Result<(usize, usize), SampleError> {
        let nt = *self
            .index
            .get(a)
            .ok_or_else(|| SampleError::UnknownNonterminal(a.to_string()))?;
        let arity = self.nts[nt].arity;
        if n < arity {
            return Err(SampleError::OutOfRange {
                symbol: a.to_string(),
                n,
                arity,
            });
        }
        let offset = n - arity;
        if offset > self.n_max {
            return Err(SampleError::TablesTooSmall {
                n_max: self.n_max,
                needed: offset,
            });
        }
        Ok((nt, offset))
    }

    /// Draws a derivation of a size-`n` graph from `a`.
    pub fn gen(&self, a: &str, n: usize, rng: &mut RandomSource) -> Result<SampleReport, SampleError> {
        let (root, offset) = self.target(a, n)?;
        if self.nts[root].m1[offset].is_zero() {
            return Err(SampleError::EmptySlice {
                symbol: a.to_string(),
                n,
            });
        }
        let arity = self.nts[root].arity;
        let mut node_count = arity;
        let mut edges: Vec<Edge> = Vec::new();
        let mut choices = Vec::new();
        // Tree in pre-order: (rule, children).
        let mut arena: Vec<(usize, Vec<usize>)> = Vec::new();
        // (nonterminal, offset, attachment, parent arena slot)
        let mut stack: Vec<(usize, usize, Vec<NodeId>, Option<usize>)> =
            vec![(root, offset, (0..arity).map(NodeId).collect(), None)];
        while let Some((nt, l, att, parent)) = stack.pop() {
            let r = self.pick_rule(nt, l, rng)?;
            let rule = &self.rules[r];
            let slot = arena.len();
            arena.push((r, Vec::new()));
            if let Some(p) = parent {
                arena[p].1.push(slot);
            }
            // Embed the rhs: external nodes onto `att`, internal nodes fresh.
            let mut map: Vec<Option<NodeId>> = vec![None; rule.rhs.node_count()];
            for (i, x) in rule.rhs.ext().iter().enumerate() {
                map[x.0] = Some(att[i]);
            }
            let map: Vec<NodeId> = map
                .into_iter()
                .map(|m| {
                    m.unwrap_or_else(|| {
                        node_count += 1;
                        NodeId(node_count - 1)
                    })
                })
                .collect();
            let image = |e: usize| rule.rhs.edges()[e].att.iter().map(|v| map[v.0]).collect::<Vec<_>>();
            match rule.kind {
                Kind::Lambda => choices.push(Choice {
                    step: slot,
                    production: rule.name.to_string(),
                    split: None,
                }),
                Kind::Terminal => {
                    edges.push(Edge::new(rule.rhs.edges()[0].label.clone(), image(0)));
                    choices.push(Choice {
                        step: slot,
                        production: rule.name.to_string(),
                        split: None,
                    });
                }
                Kind::Binary { b, c, first, second } => {
                    let budget = l - rule.internal;
                    let k = self.pick_split(r, l, b, c, budget, rng)?;
                    choices.push(Choice {
                        step: slot,
                        production: rule.name.to_string(),
                        split: Some(k),
                    });
                    stack.push((c, budget - k, image(second), Some(slot)));
                    stack.push((b, k, image(first), Some(slot)));
                }
            }
        }
        let graph = Hypergraph::new(node_count, edges, (0..arity).map(NodeId).collect());
        Ok(SampleReport {
            graph,
            tree: self.tree(&arena, 0),
            choices,
        })
    }

    fn tree(&self, arena: &[(usize, Vec<usize>)], root: usize) -> DerivationTree {
        // Children have larger indices than parents; build bottom-up.
        let mut built: Vec<Option<DerivationTree>> = vec![None; arena.len()];
        for i in (root..arena.len()).rev() {
            let (r, kids) = &arena[i];
            let children = kids.iter().map(|&k| built[k].take().unwrap()).collect();
            built[i] = Some(DerivationTree::node(self.rules[*r].name, children));
        }
        built[root].take().unwrap()
    }

    fn pick_rule(&self, nt: usize, l: usize, rng: &mut RandomSource) -> Result<usize, SampleError> {
        let total = &self.nts[nt].m1[l];
        if total.is_zero() {
            return Err(self.inconsistent(self.nts[nt].symbol.as_str(), l, "zero count reached during generation"));
        }
        let mut x = rng.uniform_below(total);
        for &r in &self.nts[nt].rules {
            let w = &self.rules[r].m2[l];
            if &x < w {
                return Ok(r);
            }
            x -= w;
        }
        Err(self.inconsistent(
            self.nts[nt].symbol.as_str(),
            l,
            "production weights sum to less than the nonterminal count",
        ))
    }

    fn pick_split(
        &self,
        r: usize,
        l: usize,
        b: usize,
        c: usize,
        budget: usize,
        rng: &mut RandomSource,
    ) -> Result<usize, SampleError> {
        let total = &self.rules[r].m2[l];
        let (mb, mc) = (self.nts[b].m1, self.nts[c].m1);
        let mut x = rng.uniform_below(total);
        let mut chosen = None;
        for k in 1..budget {
            let (wb, wc) = (&mb[k], &mc[budget - k]);
            if wb.is_zero() || wc.is_zero() {
                continue;
            }
            let w = wb * wc;
            if x < w {
                chosen = Some(k);
                break;
            }
            x -= w;
        }
        let Some(k) = chosen else {
            return Err(self.inconsistent(self.rules[r].name, l, "split weights sum to less than the production count"));
        };
        #[cfg(debug_assertions)]
        {
            let sum: BigUint = (1..budget).map(|k| &mb[k] * &mc[budget - k]).sum();
            assert_eq!(&sum, total, "split weights of {} at offset {l}", self.rules[r].name);
        }
        Ok(k)
    }

    fn inconsistent(&self, at: &str, offset: usize, detail: &str) -> SampleError {
        SampleError::InconsistentTables {
            at: at.to_string(),
            offset,
            detail: detail.to_string(),
        }
    }
}

/// `count` independent samples; sample `i` uses substream `i` of `seed`.
pub fn sample_many<'s, 'g>(
    sampler: &'s Sampler<'g>,
    a: &'s str,
    n: usize,
    seed: u64,
    count: usize,
) -> impl Iterator<Item = Result<SampleReport, SampleError>> + 's {
    (0..count as u64).map(move |i| sampler.gen(a, n, &mut RandomSource::substream(seed, i)))
}

#[cfg(test)]
mod tests;
