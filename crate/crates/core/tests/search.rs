mod common;

use pglca::builder::StarterVector;
use pglca::search::{search_starters, LocalSearchParams, Objective, SearchConfig, StarterMode};
use pglca::verifier::{coverage_brute, is_covering_array};
use pglca::{assemble, starter_check, AssemblyOptions, Context, Symbol};

fn all_vectors(g: usize, k: usize) -> impl Iterator<Item = StarterVector> {
    (0..g.pow(k as u32)).map(move |code| {
        let syms = (0..k).map(|i| Symbol(((code / g.pow(i as u32)) % g) as u8)).collect();
        StarterVector::new(g, syms).unwrap()
    })
}

#[test]
fn search_reaches_exhaustive_minimum() {
    let ctx = Context::new(3).unwrap();
    for k in 5..=7 {
        let best = all_vectors(3, k).map(|w| starter_check(&w, None, &ctx.orbits).unwrap().missing_pairs()).min().unwrap();
        let cfg = SearchConfig {
            k,
            g: 3,
            mode: StarterMode::One,
            objective: Objective::Full,
            params: LocalSearchParams::new(50_000, 4, k as u64),
            initial: None,
        };
        let out = search_starters(&cfg, &ctx.orbits).unwrap();
        assert_eq!(out.residual.missing_pairs(), best, "k={k}");
    }
}

#[test]
fn recovered_starters_assemble_to_covering_array() {
    let ctx = Context::new(3).unwrap();
    let (u, v) = common::starters(30);
    let mut broken = u.clone().into_symbols();
    broken[7] = Symbol((broken[7].code() + 1) % 3);
    let broken = StarterVector::new(3, broken).unwrap();
    assert!(!starter_check(&broken, Some(&v), &ctx.orbits).unwrap().is_empty());

    let out = (0..8)
        .map(|seed| {
            let cfg = SearchConfig {
                k: 30,
                g: 3,
                mode: StarterMode::Two,
                objective: Objective::Full,
                params: LocalSearchParams::new(20_000, 1, seed),
                initial: Some(vec![broken.clone(), v.clone()]),
            };
            search_starters(&cfg, &ctx.orbits).unwrap()
        })
        .find(|out| out.residual.is_empty())
        .expect("some seed repairs the pair");
    let a = assemble(&out.vectors[0], Some(&out.vectors[1]), None, &ctx.group, AssemblyOptions::default()).unwrap();
    assert_eq!(a.cols(), 363);
    assert!(is_covering_array(&a).valid);
    assert_eq!(out.coverage.covered, coverage_brute(&a).covered);
}

#[test]
fn same_seed_same_result() {
    let ctx = Context::new(4).unwrap();
    let cfg = SearchConfig {
        k: 9,
        g: 4,
        mode: StarterMode::Two,
        objective: Objective::MaxCoverage,
        params: LocalSearchParams::new(20_000, 2, 5),
        initial: None,
    };
    let a = search_starters(&cfg, &ctx.orbits).unwrap();
    let b = search_starters(&cfg, &ctx.orbits).unwrap();
    assert_eq!(a.vectors, b.vectors);
    assert_eq!(a.score, b.score);
}
