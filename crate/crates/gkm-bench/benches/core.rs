//! Benchmarks for the hot paths: localization, graded ranks, automorphism
//! search, and enumeration from weight data.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use gkm_core::chern::chern_numbers;
use gkm_core::classify::{case_weights, enumerate_graphs, Case};
use gkm_core::cohomology::component_rank;
use gkm_core::constructions::{catalog, CatalogId};
use gkm_core::symmetry::gkm_automorphisms;
use gkm_core::Weight;

fn w(coords: &[i64]) -> Weight {
    Weight::from_ints(coords)
}

fn q1() -> gkm_core::GkmGraph {
    catalog(&CatalogId::Q1 {
        a: w(&[1, 0]),
        b: w(&[0, 1]),
    })
    .unwrap()
}

fn bench_chern(c: &mut Criterion) {
    let g = q1();
    c.bench_function("chern_numbers/q1", |b| {
        b.iter(|| chern_numbers(black_box(&g)).unwrap())
    });
}

fn bench_component_rank(c: &mut Criterion) {
    let g = q1();
    c.bench_function("component_rank/q1/degree-12", |b| {
        b.iter(|| component_rank(black_box(&g), 12).unwrap())
    });
}

fn bench_automorphisms(c: &mut Criterion) {
    let g = catalog(&CatalogId::P1 {
        a: w(&[1, 0, 0]),
        b: w(&[0, 1, 0]),
        c: w(&[0, 0, 1]),
    })
    .unwrap();
    c.bench_function("gkm_automorphisms/p1-rank-3", |b| {
        b.iter(|| gkm_automorphisms(black_box(&g)).unwrap())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let wd = case_weights(&Case::A {
        a: w(&[1, 0]),
        b: w(&[0, 1]),
        c: w(&[1, 1]),
    })
    .unwrap();
    c.bench_function("enumerate_graphs/case-a", |b| {
        b.iter(|| enumerate_graphs(black_box(&wd), false).unwrap())
    });
}

criterion_group!(
    benches,
    bench_chern,
    bench_component_rank,
    bench_automorphisms,
    bench_enumeration
);
criterion_main!(benches);
