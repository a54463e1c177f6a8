//! Inputs shared by the benchmarks.

use hrgen_core::cnf::to_cnf;
use hrgen_core::fixtures::load;
use hrgen_core::{CountTables, Grammar, Hypergraph, RandomSource, Sampler};

/// A fixture in normal form.
pub fn normal_form(name: &str) -> Grammar {
    to_cnf(&load(name)).expect("fixtures normalize").grammar
}

/// Tables large enough to sample `n` from the start symbol.
pub fn tables(g: &Grammar, n: usize) -> CountTables {
    let arity = g.arity(g.start.as_str()).unwrap_or(0);
    CountTables::build(g, n - arity).expect("fixtures are in normal form")
}

/// One sample of size `n`, for canonical-form inputs.
pub fn sample_graph(name: &str, n: usize, seed: u64) -> Hypergraph {
    let g = normal_form(name);
    let t = tables(&g, n);
    let s = Sampler::new(&g, &t).expect("tables match grammar");
    s.gen(g.start.as_str(), n, &mut RandomSource::new(seed)).expect("slice is nonempty").graph
}
