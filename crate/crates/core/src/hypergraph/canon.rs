//! Exact canonical forms for small hypergraphs.
//!
//! Individualization-refinement: external nodes are fixed by their position,
//! colors are refined by the labels, tentacle positions and neighbour colors of
//! incident edges, and every remaining tie is broken by branching. The form is
//! the lexicographically least encoding over all leaves of the search tree. No
//! automorphism pruning is done, so highly symmetric graphs are exponential;
//! that is why the size is capped. Internal nodes without attachments are
//! interchangeable and only counted.

use std::fmt;

use super::{Hypergraph, HypergraphError};

/// Largest graph size (nodes + edges) accepted by [`canonical_form`].
pub const CANONICAL_SIZE_LIMIT: usize = 64;

/// Byte string identifying an isomorphism class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, hex::FromHexError> {
        hex::decode(s).map(CanonicalForm)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

/// Encoding that is equal for two graphs iff they are isomorphic
/// (label-, attachment- and external-sequence-preserving).
pub fn canonical_form(h: &Hypergraph) -> Result<CanonicalForm, HypergraphError> {
    if h.size() > CANONICAL_SIZE_LIMIT {
        return Err(HypergraphError::TooLarge {
            size: h.size(),
            limit: CANONICAL_SIZE_LIMIT,
        });
    }
    Ok(CanonicalForm(Canonizer::new(h).run()))
}

pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> Result<bool, HypergraphError> {
    if a.node_count() != b.node_count()
        || a.edge_count() != b.edge_count()
        || a.arity() != b.arity()
    {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

struct Canonizer<'a> {
    h: &'a Hypergraph,
    label_rank: Vec<u32>,
    /// `(edge, tentacle)` pairs per node.
    incidence: Vec<Vec<(u32, u32)>>,
    /// Nodes that are external or attached to something.
    active: Vec<usize>,
    best: Option<Vec<u8>>,
}

impl<'a> Canonizer<'a> {
    fn new(h: &'a Hypergraph) -> Self {
        let mut labels: Vec<&str> = h.edges().iter().map(|e| e.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        let label_rank = h
            .edges()
            .iter()
            .map(|e| labels.binary_search(&e.label.as_str()).unwrap() as u32)
            .collect();
        let mut incidence = vec![Vec::new(); h.node_count()];
        for (i, e) in h.edges().iter().enumerate() {
            for (pos, n) in e.att.iter().enumerate() {
                incidence[n.0].push((i as u32, pos as u32));
            }
        }
        let active = (0..h.node_count())
            .filter(|&v| !incidence[v].is_empty() || h.is_external(super::NodeId(v)))
            .collect();
        Canonizer {
            h,
            label_rank,
            incidence,
            active,
            best: None,
        }
    }

    fn run(mut self) -> Vec<u8> {
        let t = self.h.arity() as u32;
        let mut colors = vec![u32::MAX; self.h.node_count()];
        for &v in &self.active {
            colors[v] = t;
        }
        for (pos, x) in self.h.ext().iter().enumerate() {
            colors[x.0] = pos as u32;
        }
        // Dense ranks: the non-external cell is `t` only if it is nonempty.
        self.rerank(&mut colors);
        self.search(colors);
        self.best.take().unwrap()
    }

    fn rerank(&self, colors: &mut [u32]) {
        let mut distinct: Vec<u32> = self.active.iter().map(|&v| colors[v]).collect();
        distinct.sort_unstable();
        distinct.dedup();
        for &v in &self.active {
            colors[v] = distinct.binary_search(&colors[v]).unwrap() as u32;
        }
    }

    fn distinct_colors(&self, colors: &[u32]) -> usize {
        let mut c: Vec<u32> = self.active.iter().map(|&v| colors[v]).collect();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// Color refinement until stable.
    fn refine(&self, colors: &mut [u32]) {
        let mut count = self.distinct_colors(colors);
        loop {
            let mut sigs: Vec<(Vec<u32>, usize)> = Vec::with_capacity(self.active.len());
            for &v in &self.active {
                let mut entries: Vec<Vec<u32>> = self.incidence[v]
                    .iter()
                    .map(|&(e, pos)| {
                        let edge = &self.h.edges()[e as usize];
                        let mut entry = Vec::with_capacity(3 + edge.att.len());
                        entry.push(edge.att.len() as u32);
                        entry.push(self.label_rank[e as usize]);
                        entry.push(pos);
                        entry.extend(edge.att.iter().map(|n| colors[n.0]));
                        entry
                    })
                    .collect();
                entries.sort_unstable();
                let mut sig = vec![colors[v]];
                for entry in entries {
                    sig.extend(entry);
                }
                sigs.push((sig, v));
            }
            sigs.sort_unstable();
            let mut rank = 0u32;
            for i in 0..sigs.len() {
                if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                    rank += 1;
                }
                colors[sigs[i].1] = rank;
            }
            let next = rank as usize + usize::from(!sigs.is_empty());
            if next == count {
                return;
            }
            count = next;
        }
    }

    fn search(&mut self, mut colors: Vec<u32>) {
        self.refine(&mut colors);
        let mut cell_sizes = vec![0usize; self.active.len()];
        for &v in &self.active {
            cell_sizes[colors[v] as usize] += 1;
        }
        let Some(target) = cell_sizes.iter().position(|&s| s > 1) else {
            let leaf = self.encode(&colors);
            if self.best.as_ref().is_none_or(|b| leaf < *b) {
                self.best = Some(leaf);
            }
            return;
        };
        let target = target as u32;
        let members: Vec<usize> = self
            .active
            .iter()
            .copied()
            .filter(|&v| colors[v] == target)
            .collect();
        for &pick in &members {
            let mut next = colors.clone();
            for &u in &self.active {
                let c = colors[u];
                if c > target || (c == target && u != pick) {
                    next[u] = c + 1;
                }
            }
            self.search(next);
        }
    }

    /// Encoding under the ordering given by a discrete coloring.
    fn encode(&self, colors: &[u32]) -> Vec<u8> {
        let h = self.h;
        let mut out = Vec::with_capacity(16 + 8 * h.size());
        push_u32(&mut out, h.node_count() as u32);
        push_u32(&mut out, h.edge_count() as u32);
        push_u32(&mut out, h.arity() as u32);
        for x in h.ext() {
            push_u32(&mut out, colors[x.0]);
        }
        let mut edges: Vec<Vec<u8>> = h
            .edges()
            .iter()
            .map(|e| {
                let mut enc = Vec::with_capacity(8 + e.label.as_str().len() + 4 * e.att.len());
                push_u32(&mut enc, e.label.as_str().len() as u32);
                enc.extend_from_slice(e.label.as_str().as_bytes());
                push_u32(&mut enc, e.att.len() as u32);
                for n in &e.att {
                    push_u32(&mut enc, colors[n.0]);
                }
                enc
            })
            .collect();
        edges.sort_unstable();
        for e in edges {
            out.extend(e);
        }
        out
    }
}

fn push_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_be_bytes());
}
