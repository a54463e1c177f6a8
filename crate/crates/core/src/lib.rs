//! Uniform random generation of hypergraphs from hyperedge replacement
//! grammars in Chomsky normal form.
//!
//! The pipeline is: normalize a grammar ([`cnf::to_cnf`]), build derivation
//! count tables up to a size bound ([`counting::pre`]), then draw derivations
//! with probabilities proportional to those counts ([`sampler::Sampler`]). The
//! [`oracle`] module enumerates small language slices independently and is
//! what the counts and the sampler are tested against.

pub mod cnf;
pub mod counting;
pub mod fixtures;
pub mod grammar;
pub mod hypergraph;
pub mod oracle;
pub mod sampler;
pub mod symbol;

pub use cnf::{is_cnf, shorthand, to_cnf, CnfError, CnfOutcome, CnfViolation, Shorthand, ShorthandKind};
pub use counting::{pre, CountTables, CountingError};
pub use grammar::{
    validate_grammar, yield_of, DerivationError, DerivationTree, Grammar, GrammarError,
    GrammarViolation, Production,
};
pub use hypergraph::{
    canonical_form, is_isomorphic, to_dot, validate, CanonicalForm, Edge, EdgeId, Hypergraph,
    HypergraphError, NodeId, Violation,
};
pub use oracle::{census, check_n_ambiguity, enumerate_trees, language_slice, Ambiguity, OracleError, SliceCensus};
pub use sampler::{sample_many, RandomSource, SampleError, SampleReport, Sampler};
pub use symbol::{Symbol, Typing};
