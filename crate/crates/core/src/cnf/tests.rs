use std::collections::BTreeMap;

use super::*;
use crate::fixtures::{build_anbncn_grammar, expressions_cnf, load, NAMES};
use crate::grammar::validate_grammar;
use crate::oracle::{census_with_cap, language_slice};

fn e(label: &str, att: &[usize]) -> Edge {
    Edge::new(label, att.iter().map(|&v| NodeId(v)).collect())
}

fn ext(n: usize) -> Vec<NodeId> {
    (0..n).map(NodeId).collect()
}

fn grammar(types: &[(&str, usize)], nts: &[&str], ts: &[&str], start: &str, prods: Vec<Production>) -> Grammar {
    Grammar {
        typing: types.iter().map(|&(s, a)| (s, a)).collect(),
        nonterminals: nts.iter().map(|s| Symbol::new(s)).collect(),
        terminals: ts.iter().map(|s| Symbol::new(s)).collect(),
        start: Symbol::new(start),
        productions: prods,
    }
}

fn p(name: &str, lhs: &str, nodes: usize, ext_len: usize, edges: Vec<Edge>) -> Production {
    Production::in_edge_order(name, lhs, Hypergraph::new(nodes, edges, self::ext(ext_len)))
}

/// `(lhs type, kind tag, internal)` multiset, insensitive to renaming.
fn signature(g: &Grammar) -> BTreeMap<(usize, &'static str, usize), usize> {
    let mut out = BTreeMap::new();
    for s in shorthand(g).unwrap() {
        let tag = match s.kind {
            ShorthandKind::NonTerminal(..) => "binary",
            ShorthandKind::Terminal(_) => "terminal",
            ShorthandKind::Lambda => "lambda",
        };
        *out.entry((g.arity(s.lhs.as_str()).unwrap(), tag, s.internal)).or_insert(0) += 1;
    }
    out
}

fn same_language(g: &Grammar, h: &Grammar, max_n: usize) {
    for n in 0..=max_n {
        assert_eq!(language_slice(g, n).unwrap(), language_slice(h, n).unwrap(), "size {n}");
    }
}

#[test]
fn conformance_of_fixtures() {
    assert_eq!(is_cnf(&expressions_cnf()), vec![]);
    let v = is_cnf(&load("fig2_ambiguous"));
    assert_eq!(
        v,
        vec![CnfViolation::Shape {
            production: "P1".into(),
            edges: 3,
            nonterminal_edges: 3,
            internal: 2
        }]
    );
    let flagged: Vec<String> = is_cnf(&load("fig6_lemma_demo"))
        .into_iter()
        .map(|v| match v {
            CnfViolation::Shape { production, .. }
            | CnfViolation::EmptyNotStart { production }
            | CnfViolation::StartEmptyButStartInRhs { production } => production,
        })
        .collect();
    assert_eq!(flagged, ["P1", "P2", "P3", "P4"]);
}

#[test]
fn start_empty_production_rules() {
    // Allowed: the start symbol occurs in no rhs.
    let g = build_anbncn_grammar();
    assert!(!is_cnf(&g).iter().any(|v| matches!(v, CnfViolation::StartEmptyButStartInRhs { .. })));
    let g = grammar(
        &[("S", 1), ("a", 1)],
        &["S"],
        &["a"],
        "S",
        vec![
            p("P1", "S", 1, 1, vec![]),
            p("P2", "S", 2, 1, vec![e("S", &[0]), e("S", &[1])]),
        ],
    );
    assert_eq!(
        is_cnf(&g),
        vec![CnfViolation::StartEmptyButStartInRhs {
            production: "P1".into()
        }]
    );
}

#[test]
fn shorthand_of_expression_grammar() {
    let sh = shorthand(&expressions_cnf()).unwrap();
    assert_eq!(
        sh[0],
        Shorthand {
            name: "P1".into(),
            lhs: Symbol::new("A"),
            kind: ShorthandKind::NonTerminal(Symbol::new("C"), Symbol::new("A")),
            internal: 1
        }
    );
    assert_eq!(
        sh[2],
        Shorthand {
            name: "P3".into(),
            lhs: Symbol::new("A"),
            kind: ShorthandKind::Terminal(Symbol::new("1")),
            internal: 0
        }
    );
    assert!(matches!(shorthand(&load("fig2_ambiguous")), Err(CnfError::NotCnf(_))));
}

#[test]
fn shorthand_follows_marks_not_edge_order() {
    let mut g = expressions_cnf();
    let p1 = &mut g.productions[0];
    p1.marks = vec![2, 1];
    let sh = shorthand(&g).unwrap();
    assert_eq!(sh[0].kind, ShorthandKind::NonTerminal(Symbol::new("A"), Symbol::new("C")));
}

#[test]
fn start_empty_shorthand_is_lambda() {
    let g = to_cnf(&build_anbncn_grammar()).unwrap().grammar;
    let sh = shorthand(&g).unwrap();
    let p0 = sh.iter().find(|s| s.name == "P0").unwrap();
    assert_eq!((p0.kind.clone(), p0.internal), (ShorthandKind::Lambda, 0));
}

#[test]
fn normal_form_input_is_returned_unchanged() {
    let g = expressions_cnf();
    let out = to_cnf(&g).unwrap();
    assert!(out.already_cnf);
    assert_eq!(out.grammar, g);
    assert!(out.trace.is_empty());
}

#[test]
fn every_fixture_normalizes() {
    for name in NAMES {
        let out = to_cnf(&load(name)).unwrap();
        assert_eq!(is_cnf(&out.grammar), vec![], "{name}");
        assert_eq!(validate_grammar(&out.grammar), vec![], "{name}");
        let again = to_cnf(&out.grammar).unwrap();
        assert!(again.already_cnf, "{name}");
        assert_eq!(signature(&again.grammar), signature(&out.grammar), "{name}");
    }
}

#[test]
fn demo_grammar_uses_every_rule() {
    let out = to_cnf(&load("fig6_lemma_demo")).unwrap();
    let g = &out.grammar;
    // The type-3 nonterminal with the empty production is inlined away.
    assert!(!g.is_nonterminal("B"));
    assert!(out.trace.iter().any(|l| l.starts_with("inlined `B`")));
    assert!(out.trace.iter().any(|l| l.starts_with("replaced unit production")));
    assert!(out.trace.iter().any(|l| l.starts_with("split ")));
    // Terminal `a` is outlined into a handle production of a fresh symbol.
    let outlined: Vec<&Production> = g
        .productions
        .iter()
        .filter(|p| p.lhs.as_str().starts_with("_T") && p.rhs.edge_count() == 1)
        .collect();
    assert_eq!(outlined.len(), 1);
    assert_eq!(outlined[0].rhs.edges()[0].label.as_str(), "a");
    assert_eq!(outlined[0].rhs.internal_node_count(), 0);
    // A fresh binary symbol carries the two moved edges of the split.
    assert!(g
        .productions
        .iter()
        .any(|p| p.lhs.as_str().starts_with("_T") && p.rhs.edge_count() == 2));
}

#[test]
fn normalization_preserves_small_languages() {
    for name in ["fig3_unambiguous", "fig6_lemma_demo", "anbncn"] {
        let g = load(name);
        let h = to_cnf(&g).unwrap().grammar;
        same_language(&g, &h, 8);
    }
}

#[test]
fn oracle_census_agrees_with_generic_slices_after_normalization() {
    let g = load("fig6_lemma_demo");
    let h = to_cnf(&g).unwrap().grammar;
    for n in 2..=8 {
        let keys: std::collections::HashSet<_> =
            census_with_cap(&h, h.start.as_str(), n, 8).unwrap().entries.into_keys().collect();
        assert_eq!(keys, language_slice(&g, n).unwrap(), "size {n}");
    }
}

#[test]
fn unproductive_start_is_returned_with_diagnostic() {
    let g = grammar(
        &[("S", 1), ("a", 1)],
        &["S"],
        &["a"],
        "S",
        vec![p("P1", "S", 1, 1, vec![e("S", &[0]), e("a", &[0]), e("a", &[0])])],
    );
    let out = to_cnf(&g).unwrap();
    assert_eq!(out.grammar, g);
    assert_eq!(out.diagnostics.len(), 1);
}

#[test]
fn invalid_grammar_is_rejected() {
    let mut g = expressions_cnf();
    g.productions[0].marks = vec![1, 1];
    assert!(matches!(to_cnf(&g), Err(CnfError::Invalid(_))));
}

#[test]
fn nullable_recursive_start() {
    // S -> a S | empty, where S occurs in its own rhs: needs a fresh start
    // symbol and nullable-edge deletion.
    let g = grammar(
        &[("S", 1), ("a", 1)],
        &["S"],
        &["a"],
        "S",
        vec![
            p("P1", "S", 1, 1, vec![e("a", &[0]), e("S", &[0])]),
            p("P2", "S", 1, 1, vec![]),
        ],
    );
    let out = to_cnf(&g).unwrap();
    assert_eq!(out.grammar.start.as_str(), "_S0");
    assert_eq!(is_cnf(&out.grammar), vec![]);
    same_language(&g, &out.grammar, 7);
}

#[test]
fn unit_cycles_without_growth_are_resolved() {
    let g = grammar(
        &[("A", 2), ("B", 2), ("a", 2)],
        &["A", "B"],
        &["a"],
        "A",
        vec![
            p("P1", "A", 2, 2, vec![e("B", &[1, 0])]),
            p("P2", "B", 2, 2, vec![e("A", &[1, 0])]),
            p("P3", "B", 2, 2, vec![e("a", &[0, 1])]),
            p("P4", "A", 3, 2, vec![e("A", &[0, 2]), e("B", &[2, 1])]),
        ],
    );
    let out = to_cnf(&g).unwrap();
    assert_eq!(is_cnf(&out.grammar), vec![]);
    same_language(&g, &out.grammar, 8);
}

#[test]
fn growing_unit_cycle_is_an_error() {
    let g = grammar(
        &[("A", 1), ("a", 1)],
        &["A"],
        &["a"],
        "A",
        vec![
            p("P1", "A", 2, 1, vec![e("A", &[0])]),
            p("P2", "A", 1, 1, vec![e("a", &[0])]),
        ],
    );
    assert!(matches!(to_cnf(&g), Err(CnfError::UnitCycle(_))));
}

#[test]
fn fresh_names_skip_existing_symbols() {
    let g = grammar(
        &[("S", 1), ("_T1", 1), ("a", 1)],
        &["S", "_T1"],
        &["a"],
        "S",
        vec![
            p("P1", "S", 1, 1, vec![e("_T1", &[0]), e("_T1", &[0]), e("_T1", &[0])]),
            p("P2", "_T1", 1, 1, vec![e("a", &[0])]),
        ],
    );
    let out = to_cnf(&g).unwrap().grammar;
    assert!(out.is_nonterminal("_T2"));
    assert_eq!(out.nonterminals.iter().filter(|s| s.as_str() == "_T1").count(), 1);
}

#[test]
fn odometer_order() {
    assert_eq!(odometer(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert_eq!(odometer(0, 3), vec![Vec::<usize>::new()]);
    assert!(odometer(2, 0).is_empty());
}

#[test]
fn self_unit_permutation_is_closed() {
    // A -> A with swapped attachments: the language is closed under reversal.
    let g = grammar(
        &[("A", 2), ("a", 2)],
        &["A"],
        &["a"],
        "A",
        vec![
            p("P1", "A", 2, 2, vec![e("A", &[1, 0])]),
            p("P2", "A", 3, 2, vec![e("a", &[0, 2]), e("a", &[2, 1]), e("a", &[2, 2])]),
        ],
    );
    let out = to_cnf(&g).unwrap();
    assert_eq!(is_cnf(&out.grammar), vec![]);
    same_language(&g, &out.grammar, 8);
}
