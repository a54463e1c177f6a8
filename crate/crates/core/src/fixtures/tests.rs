use super::*;
use crate::cnf::{is_cnf, to_cnf};
use crate::grammar::validate_grammar;
use crate::oracle::oracle_tables;

fn normal_form(name: &str) -> Grammar {
    to_cnf(&load(name)).unwrap().grammar
}

fn sidecar_tables(name: &str) -> CountTables {
    let g = normal_form(name);
    let types: Vec<usize> = g.nonterminals.iter().map(|s| g.arity(s.as_str()).unwrap()).collect();
    let (lo, hi) = (*types.iter().min().unwrap(), *types.iter().max().unwrap());
    let n_max = SIDECAR_SIZE - lo;
    oracle_tables(&g, n_max, n_max + hi).unwrap()
}

#[test]
fn every_fixture_is_valid() {
    for name in NAMES {
        assert_eq!(validate_grammar(&load(name)), vec![], "{name}");
    }
}

#[test]
fn cnf_fixtures_need_no_normalization() {
    assert!(is_cnf(&load("fig4_cnf")).is_empty());
    assert!(is_cnf(&load("node_chain")).is_empty());
}

#[test]
fn anbncn_builder_matches_file() {
    assert_eq!(build_anbncn_grammar(), load("anbncn"));
}

#[test]
fn fixture_files_round_trip() {
    for name in NAMES {
        let g = load(name);
        assert_eq!(Grammar::from_json_str(&g.to_json_string()).unwrap(), g, "{name}");
    }
}

/// Set `HRGEN_BLESS=1` to rewrite the sidecars from fresh oracle runs.
#[test]
fn sidecars_match_fresh_oracle_runs() {
    let bless = std::env::var_os("HRGEN_BLESS").is_some();
    for name in NAMES {
        let fresh = sidecar_tables(name);
        if bless {
            let path = format!("{}/fixtures/{name}.counts.json", env!("CARGO_MANIFEST_DIR"));
            std::fs::write(path, fresh.to_json_string()).unwrap();
        } else {
            assert_eq!(load_sidecar(name), fresh, "{name} sidecar is stale");
        }
    }
}

#[test]
fn string_graph_reader() {
    let g = build_anbncn_grammar();
    let empty = &g.productions[0].rhs;
    assert_eq!(read_string_graph(empty).as_deref(), Some(""));
    let path = Hypergraph::new(3, vec![edge("b", &[1, 2]), edge("a", &[0, 1])], ext(3)[..0].to_vec());
    assert_eq!(read_string_graph(&path), None);
    let path = Hypergraph::new(3, vec![edge("b", &[1, 2]), edge("a", &[0, 1])], vec![NodeId(0), NodeId(2)]);
    assert_eq!(read_string_graph(&path).as_deref(), Some("ab"));
    let cycle = Hypergraph::new(2, vec![edge("a", &[0, 1]), edge("a", &[1, 0])], vec![NodeId(0), NodeId(1)]);
    assert_eq!(read_string_graph(&cycle), None);
}
