use std::collections::HashSet;

use super::*;
use crate::cnf::to_cnf;
use crate::fixtures::{expressions_cnf, load};
use crate::grammar::yield_of;
use crate::hypergraph::{canonical_form, is_isomorphic, validate};
use crate::oracle::census_with_cap;

fn tables(g: &Grammar, n: usize) -> CountTables {
    CountTables::build(g, n).unwrap()
}

#[test]
fn uniform_below_small_bounds() {
    let mut rng = RandomSource::new(1);
    let mut hist = [0usize; 3];
    for _ in 0..30_000 {
        let x = rng.uniform_below(&BigUint::from(3u8));
        hist[x.to_usize().unwrap()] += 1;
    }
    // Each cell is Binomial(30000, 1/3): sd is about 82.
    assert!(hist.iter().all(|&h| (h as i64 - 10_000).abs() < 500), "{hist:?}");
    assert!(rng.uniform_below(&BigUint::from(1u8)).is_zero());
}

#[test]
fn uniform_below_large_bounds() {
    let bound = (BigUint::from(1u8) << 100u32) + BigUint::from(12345u32);
    let mut rng = RandomSource::new(2);
    let mut high = 0;
    for _ in 0..2_000 {
        let x = rng.uniform_below(&bound);
        assert!(x < bound);
        if x.bits() == 100 {
            high += 1;
        }
    }
    // About half the draws use the top bit.
    assert!((800..1200).contains(&high), "{high}");
}

#[test]
#[should_panic]
fn uniform_below_zero_panics() {
    RandomSource::new(0).uniform_below(&BigUint::zero());
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let draw = |mut r: RandomSource| (0..8).map(|_| r.next_u32()).collect::<Vec<_>>();
    assert_eq!(draw(RandomSource::new(5)), draw(RandomSource::new(5)));
    assert_ne!(draw(RandomSource::new(5)), draw(RandomSource::new(6)));
    assert_ne!(draw(RandomSource::substream(5, 0)), draw(RandomSource::substream(5, 1)));
}

#[test]
fn smallest_size_is_forced() {
    let g = expressions_cnf();
    let t = tables(&g, 12);
    let s = Sampler::new(&g, &t).unwrap();
    for seed in 0..10 {
        let r = s.gen("A", 2, &mut RandomSource::new(seed)).unwrap();
        assert_eq!(r.tree, DerivationTree::leaf("P3"));
        assert!(is_isomorphic(&r.graph, &g.production("P3").unwrap().rhs).unwrap());
    }
}

#[test]
fn failures() {
    let g = expressions_cnf();
    let t = tables(&g, 12);
    let s = Sampler::new(&g, &t).unwrap();
    let mut rng = RandomSource::new(0);
    assert_eq!(
        s.gen("A", 3, &mut rng),
        Err(SampleError::EmptySlice { symbol: "A".into(), n: 3 })
    );
    assert!(matches!(s.gen("B", 2, &mut rng), Err(SampleError::OutOfRange { arity: 3, .. })));
    assert!(matches!(s.gen("A", 30, &mut rng), Err(SampleError::TablesTooSmall { .. })));
    assert!(matches!(s.gen("Q", 3, &mut rng), Err(SampleError::UnknownNonterminal(_))));
    let raw = load("fig2_ambiguous");
    assert!(matches!(Sampler::new(&raw, &t), Err(SampleError::NotCnf)));
}

#[test]
fn corrupted_tables_are_detected() {
    let g = expressions_cnf();
    let good = tables(&g, 9);
    let doc = good.to_json_string().replace("\"616\"", "\"6160\"");
    let bad = CountTables::from_json_str(&doc).unwrap();
    let s = Sampler::new(&g, &bad).unwrap();
    let mut hit = false;
    for seed in 0..200 {
        match s.gen("A", 10, &mut RandomSource::new(seed)) {
            Err(SampleError::InconsistentTables { .. }) => hit = true,
            Ok(_) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(hit);
}

#[test]
fn samples_are_sound() {
    for name in ["fig4_cnf", "fig3_unambiguous", "fig6_lemma_demo", "anbncn"] {
        let g = to_cnf(&load(name)).unwrap().grammar;
        let t = tables(&g, 70);
        let s = Sampler::new(&g, &t).unwrap();
        let arity = g.arity(g.start.as_str()).unwrap();
        let row = t.m1_row(g.start.as_str()).unwrap();
        let mut sizes: Vec<usize> = (0..=70).filter(|&l| !row[l].is_zero()).map(|l| l + arity).collect();
        sizes.truncate(5);
        sizes.push((60..=70).rev().find(|&l| !row[l].is_zero()).unwrap() + arity);
        let start = g.start.as_str();
        for n in sizes {
            for r in sample_many(&s, start, n, 11, 50) {
                let r = r.unwrap_or_else(|e| panic!("{name} {n}: {e}"));
                assert_eq!(r.graph.size(), n);
                assert!(r.graph.edges().iter().all(|e| g.is_terminal(e.label.as_str())));
                assert_eq!(validate(&r.graph, &g.typing), vec![]);
                if n <= 40 {
                    assert!(is_isomorphic(&yield_of(&g, &r.tree).unwrap(), &r.graph).unwrap());
                }
                let steps: Vec<String> = r.choices.iter().map(|c| c.production.clone()).collect();
                assert_eq!(steps, r.tree.leftmost_sequence());
            }
        }
    }
}

#[test]
fn sample_many_is_deterministic() {
    let g = expressions_cnf();
    let t = tables(&g, 12);
    let s = Sampler::new(&g, &t).unwrap();
    let a: Vec<_> = sample_many(&s, "A", 12, 3, 20).map(Result::unwrap).collect();
    let b: Vec<_> = sample_many(&s, "A", 12, 3, 20).map(Result::unwrap).collect();
    assert_eq!(a, b);
    assert_eq!(sample_many(&s, "A", 12, 3, 0).count(), 0);
    // Sample i does not depend on the samples before it.
    let single = s.gen("A", 12, &mut RandomSource::substream(3, 7)).unwrap();
    assert_eq!(single, a[7]);
}

#[test]
fn samples_cover_the_slice() {
    let g = expressions_cnf();
    let t = tables(&g, 12);
    let s = Sampler::new(&g, &t).unwrap();
    let census = census_with_cap(&g, "A", 8, 8).unwrap();
    assert_eq!(census.total_graphs, 92);
    let mut seen = HashSet::new();
    for r in sample_many(&s, "A", 8, 99, 4_000) {
        let form = canonical_form(&r.unwrap().graph).unwrap();
        assert!(census.entries.contains_key(&form));
        seen.insert(form);
    }
    assert_eq!(seen.len(), 92);
}

#[test]
fn report_serializes_choices() {
    let g = expressions_cnf();
    let t = tables(&g, 12);
    let s = Sampler::new(&g, &t).unwrap();
    let r = s.gen("A", 4, &mut RandomSource::new(0)).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["choices"][0]["production"], "P2");
    assert_eq!(v["choices"][0]["split"], 1);
    assert!(v["choices"][1].get("split").is_none());
}
