//! Derivation counts per nonterminal and per production, by size offset.
//!
//! `m1[A][l]` is the number of derivation trees rooted at `A` whose yield has
//! size `l + type(A)`; `m2[p][l]` counts those whose root production is `p`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{CnfError, Shorthand, ShorthandKind};
use crate::grammar::Grammar;
use crate::symbol::Symbol;

#[derive(Debug, Error)]
pub enum CountingError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("shorthand for {0} refers to a symbol that is not a nonterminal")]
    UnknownNonterminal(String),
    #[error("no row for `{0}`")]
    MissingRow(String),
    #[error("offset {offset} is beyond the table bound {n_max}")]
    OutOfRange { offset: usize, n_max: usize },
    #[error("invalid count tables: {0}")]
    Malformed(String),
    #[error("invalid count tables JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTables {
    n_max: usize,
    m1: BTreeMap<Symbol, Vec<BigUint>>,
    m2: BTreeMap<String, Vec<BigUint>>,
}

/// Builds the tables for offsets `0..=n`.
///
/// Column `l` of every production is computed from columns `< l` of the
/// nonterminal rows, then folded into column `l` of the nonterminal rows. A
/// binary production with `i` internal nodes reads `m1[B][k] * m1[C][l-i-k]`
/// for `1 <= k < l - i`.
pub fn pre(g: &Grammar, shorthands: &[Shorthand], n: usize) -> Result<CountTables, CountingError> {
    let index: BTreeMap<&Symbol, usize> = g.nonterminals.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let nt = |s: &Symbol, p: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| CountingError::UnknownNonterminal(p.to_string()))
    };
    enum Kind {
        Terminal,
        Lambda,
        Binary(usize, usize),
    }
    let mut rules = Vec::with_capacity(shorthands.len());
    for s in shorthands {
        let kind = match &s.kind {
            ShorthandKind::Terminal(_) => Kind::Terminal,
            ShorthandKind::Lambda => Kind::Lambda,
            ShorthandKind::NonTerminal(b, c) => Kind::Binary(nt(b, &s.name)?, nt(c, &s.name)?),
        };
        rules.push((nt(&s.lhs, &s.name)?, kind, s.internal));
    }

    let mut m1 = vec![vec![BigUint::zero(); n + 1]; g.nonterminals.len()];
    let mut m2 = vec![vec![BigUint::zero(); n + 1]; shorthands.len()];
    for l in 0..=n {
        for (p, (lhs, kind, i)) in rules.iter().enumerate() {
            let value = match *kind {
                Kind::Terminal => BigUint::from(u8::from(l == i + 1)),
                Kind::Lambda => BigUint::from(u8::from(l == *i)),
                Kind::Binary(b, c) => {
                    let mut sum = BigUint::zero();
                    if l >= i + 2 {
                        let budget = l - i;
                        for k in 1..budget {
                            let (x, y) = (&m1[b][k], &m1[c][budget - k]);
                            if !x.is_zero() && !y.is_zero() {
                                sum += x * y;
                            }
                        }
                    }
                    sum
                }
            };
            m1[*lhs][l] += &value;
            m2[p][l] = value;
        }
    }

    Ok(CountTables {
        n_max: n,
        m1: g.nonterminals.iter().cloned().zip(m1).collect(),
        m2: shorthands.iter().map(|s| s.name.clone()).zip(m2).collect(),
    })
}

impl CountTables {
    /// `pre` on the shorthand view of `g`.
    pub fn build(g: &Grammar, n: usize) -> Result<Self, CountingError> {
        pre(g, &crate::cnf::shorthand(g)?, n)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn m1_row(&self, a: &str) -> Option<&[BigUint]> {
        self.m1.get(a).map(Vec::as_slice)
    }

    pub fn m2_row(&self, p: &str) -> Option<&[BigUint]> {
        self.m2.get(p).map(Vec::as_slice)
    }

    pub fn m1(&self, a: &str, offset: usize) -> Result<&BigUint, CountingError> {
        self.check(offset)?;
        Ok(&self.m1_row(a).ok_or_else(|| CountingError::MissingRow(a.to_string()))?[offset])
    }

    pub fn m2(&self, p: &str, offset: usize) -> Result<&BigUint, CountingError> {
        self.check(offset)?;
        Ok(&self.m2_row(p).ok_or_else(|| CountingError::MissingRow(p.to_string()))?[offset])
    }

    pub fn nonterminal_rows(&self) -> impl Iterator<Item = (&Symbol, &[BigUint])> {
        self.m1.iter().map(|(s, r)| (s, r.as_slice()))
    }

    pub fn production_rows(&self) -> impl Iterator<Item = (&str, &[BigUint])> {
        self.m2.iter().map(|(s, r)| (s.as_str(), r.as_slice()))
    }

    fn check(&self, offset: usize) -> Result<(), CountingError> {
        if offset > self.n_max {
            return Err(CountingError::OutOfRange {
                offset,
                n_max: self.n_max,
            });
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("tables serialize");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self, CountingError> {
        Self::from_doc(serde_json::from_str(s)?)
    }

    fn to_doc(&self) -> TablesDoc {
        let dec = |r: &Vec<BigUint>| r.iter().map(|x| x.to_str_radix(10)).collect();
        TablesDoc {
            n_max: self.n_max,
            m1: self.m1.iter().map(|(k, r)| (k.to_string(), dec(r))).collect(),
            m2: self.m2.iter().map(|(k, r)| (k.clone(), dec(r))).collect(),
        }
    }

    fn from_doc(doc: TablesDoc) -> Result<Self, CountingError> {
        let parse = |key: &str, r: Vec<String>| -> Result<Vec<BigUint>, CountingError> {
            if r.len() != doc.n_max + 1 {
                return Err(CountingError::Malformed(format!(
                    "row `{key}` has {} entries, expected {}",
                    r.len(),
                    doc.n_max + 1
                )));
            }
            r.iter()
                .map(|x| {
                    x.parse::<BigUint>()
                        .map_err(|_| CountingError::Malformed(format!("row `{key}`: `{x}` is not a count")))
                })
                .collect()
        };
        let mut m1 = BTreeMap::new();
        for (k, r) in doc.m1 {
            let row = parse(&k, r)?;
            m1.insert(Symbol::from(k), row);
        }
        let mut m2 = BTreeMap::new();
        for (k, r) in doc.m2 {
            let row = parse(&k, r)?;
            m2.insert(k, row);
        }
        Ok(CountTables {
            n_max: doc.n_max,
            m1,
            m2,
        })
    }

    /// Assembles tables from explicit rows; every row needs `n_max + 1` entries.
    pub fn from_rows(
        n_max: usize,
        m1: BTreeMap<Symbol, Vec<BigUint>>,
        m2: BTreeMap<String, Vec<BigUint>>,
    ) -> Result<Self, CountingError> {
        if let Some((k, _)) = m1.iter().find(|(_, r)| r.len() != n_max + 1) {
            return Err(CountingError::Malformed(format!("row `{k}` has the wrong length")));
        }
        if let Some((k, _)) = m2.iter().find(|(_, r)| r.len() != n_max + 1) {
            return Err(CountingError::Malformed(format!("row `{k}` has the wrong length")));
        }
        Ok(CountTables { n_max, m1, m2 })
    }
}

#[derive(Serialize, Deserialize)]
struct TablesDoc {
    n_max: usize,
    m1: BTreeMap<String, Vec<String>>,
    m2: BTreeMap<String, Vec<String>>,
}

/// `m1[A][offset]`.
pub fn table_lookup<'t>(tables: &'t CountTables, a: &str, offset: usize) -> Result<&'t BigUint, CountingError> {
    tables.m1(a, offset)
}

/// `(p, m2[p][offset])` for every production of `a`, in declaration order.
pub fn production_weights(
    tables: &CountTables,
    g: &Grammar,
    a: &str,
    offset: usize,
) -> Result<Vec<(String, BigUint)>, CountingError> {
    g.productions_for(a)
        .map(|p| Ok((p.name.clone(), tables.m2(&p.name, offset)?.clone())))
        .collect()
}
