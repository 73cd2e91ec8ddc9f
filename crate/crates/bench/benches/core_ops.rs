use std::hint::black_box;
use std::path::Path;

use autfn_bench::{transvection_chain, zigzag_word};
use autfn_core::modgroup::{sl_generators, DEFAULT_CAP};
use autfn_core::scenario::{self, RunOptions};
use autfn_core::{abelianize, is_basis, Caps, Endo, FiniteGroupTable, NamedGenerator, PackedMatrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn words(c: &mut Criterion) {
    let mut g = c.benchmark_group("word");
    for len in [64, 1024] {
        let w = zigzag_word(4, len);
        let v = w.inverse();
        g.bench_with_input(BenchmarkId::new("multiply", len), &len, |b, _| b.iter(|| black_box(&w).multiply(&v)));
        g.bench_with_input(BenchmarkId::new("cyclic_reduce", len), &len, |b, _| b.iter(|| black_box(&w).cyclic_reduce()));
    }
    g.finish();
}

fn automorphisms(c: &mut Criterion) {
    let mut g = c.benchmark_group("endo");
    let f = transvection_chain(5, 12);
    let h = transvection_chain(5, 7);
    g.bench_function("compose", |b| b.iter(|| black_box(&f).compose(&h)));
    g.bench_function("invert", |b| b.iter(|| black_box(&f).invert()));
    g.bench_function("is_basis", |b| b.iter(|| is_basis(black_box(f.images()))));
    g.bench_function("abelianize", |b| b.iter(|| abelianize(black_box(&f))));
    let c12 = Endo::named(NamedGenerator::C(1, 2), 2).unwrap();
    g.bench_function("inner_witness", |b| b.iter(|| black_box(&c12).inner_witness()));
    let rot = Endo::compose_chain(
        4,
        &[
            Endo::named(NamedGenerator::P(1, 2), 4).unwrap(),
            Endo::named(NamedGenerator::P(2, 3), 4).unwrap(),
            Endo::named(NamedGenerator::P(3, 4), 4).unwrap(),
        ],
    )
    .unwrap();
    g.bench_function("order", |b| b.iter(|| black_box(&rot).order(Caps::default())));
    g.finish();
}

fn finite_groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("modgroup");
    g.sample_size(10);
    g.bench_function("enumerate SL(3,Z/2)", |b| b.iter(|| FiniteGroupTable::sl(3, 2, DEFAULT_CAP).unwrap().order()));
    let sl = FiniteGroupTable::sl(3, 4, DEFAULT_CAP).unwrap();
    let seed = PackedMatrix::elementary(3, 4, 1, 2, 2).unwrap();
    g.bench_function("normal closure in SL(3,Z/4)", |b| {
        b.iter(|| sl.normal_closure(black_box(&[seed]), DEFAULT_CAP).unwrap().order())
    });
    let gens = sl_generators(3, 4).unwrap();
    let x = gens[0].mul(&gens[1]);
    g.bench_function("packed mul", |b| b.iter(|| black_box(&x).mul(&gens[0])));
    g.finish();
}

fn corpus(c: &mut Criterion) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut g = c.benchmark_group("scenario");
    g.sample_size(10);
    g.bench_function("replay corpus", |b| b.iter(|| scenario::replay_all(&dir, &RunOptions::default()).success()));
    g.finish();
}

criterion_group!(benches, words, automorphisms, finite_groups, corpus);
criterion_main!(benches);
