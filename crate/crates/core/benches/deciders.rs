//! Deciders on the rayon pool versus a single-thread pool. The work is
//! identical in both arms; only the pool size differs.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kgraph_core::builtins;
use kgraph_core::deciders::aperiodicity::is_aperiodic;
use kgraph_core::deciders::cofinality::cofinal_search;
use kgraph_core::verdict::SearchBounds;
use std::hint::black_box;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", single), ("parallel", default)]
}

fn deciders(c: &mut Criterion) {
    let bounds = SearchBounds::default();
    let window = builtins::delta(2, -4, 4).unwrap();
    let twisted = builtins::f2_theta(3, 3, &[1, 2, 0, 4, 5, 3, 7, 8, 6]).unwrap();
    let mut group = c.benchmark_group("deciders");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("cofinal_search/delta", label), &window, |b, g| {
            b.iter(|| pool.install(|| black_box(cofinal_search(g, &bounds).unwrap())))
        });
        group.bench_with_input(BenchmarkId::new("aperiodic/delta", label), &window, |b, g| {
            b.iter(|| pool.install(|| black_box(is_aperiodic(g, &bounds).unwrap())))
        });
        group.bench_with_input(BenchmarkId::new("aperiodic/f2_theta", label), &twisted, |b, g| {
            b.iter(|| pool.install(|| black_box(is_aperiodic(g, &bounds).unwrap())))
        });
    }
    group.finish();
}

criterion_group!(benches, deciders);
criterion_main!(benches);
