use criterion::{criterion_group, criterion_main, Criterion};
use qtangle::intertwiner::jones_wenzl;
use qtangle::invariant::{link_invariant_with, Mode};
use qtangle::quiverkat::gamma_algebra;
use qtangle::tangle::{random_link, RandomConfig};
use std::hint::black_box;

const PRECISION: usize = 48;

fn invariants(c: &mut Criterion) {
    let mut group = c.benchmark_group("link_invariant");
    group.sample_size(10);
    for colour in 1..=2 {
        let d = random_link(10, &RandomConfig::new(colour), 5);
        for mode in [Mode::Global, Mode::Sliced] {
            group.bench_function(format!("colour {colour}, {mode:?}"), |b| {
                b.iter(|| link_invariant_with(black_box(&d), PRECISION, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn projectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("jones_wenzl");
    group.sample_size(10);
    for n in 2..=4 {
        group.bench_function(format!("n = {n}"), |b| {
            b.iter(|| jones_wenzl(black_box(n), PRECISION))
        });
    }
    group.finish();
}

fn algebras(c: &mut Criterion) {
    let mut group = c.benchmark_group("quiver");
    group.sample_size(10);
    group.bench_function("gamma_algebra", |b| b.iter(|| gamma_algebra().unwrap()));
    group.finish();
}

criterion_group!(benches, invariants, projectors, algebras);
criterion_main!(benches);
