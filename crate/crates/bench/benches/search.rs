use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use concsp::coloring::{color_all_pairs, verdict};
use concsp::counterexamples::build_parity_structure;
use concsp::poly_search::find_polymorphism;
use concsp::solver::{solve_backtracking, two_three_consistency};
use concsp::IndicatorQuery;
use concsp_bench::{corpus_structure, instances};

fn polymorphism_search(c: &mut Criterion) {
    let parity = build_parity_structure();
    let wnu4 = IndicatorQuery::wnu(2, 4).unwrap();
    c.bench_function("parity quaternary WNU search", |b| {
        b.iter(|| find_polymorphism(black_box(&parity), &wnu4).unwrap())
    });
    let s = corpus_structure(11, 4);
    c.bench_function("color all pairs, domain 4", |b| {
        b.iter(|| color_all_pairs(black_box(&s)).unwrap())
    });
    c.bench_function("verdict, domain 4", |b| {
        b.iter(|| verdict(black_box(&s)).unwrap())
    });
}

fn solving(c: &mut Criterion) {
    let s = corpus_structure(5, 4);
    let batch = instances(&s, 0..32);
    c.bench_function("(2,3)-consistency, 32 instances", |b| {
        b.iter(|| {
            batch
                .iter()
                .filter(|i| two_three_consistency(i).is_consistent())
                .count()
        })
    });
    c.bench_function("backtracking, 32 instances", |b| {
        b.iter(|| {
            batch
                .iter()
                .filter(|i| solve_backtracking(i).is_some())
                .count()
        })
    });
}

criterion_group!(benches, polymorphism_search, solving);
criterion_main!(benches);
