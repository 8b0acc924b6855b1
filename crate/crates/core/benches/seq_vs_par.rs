//! Sequential vs rayon-parallel timing for the two data-parallel sweeps:
//! the confluence word sweep and the index-pairing grid.

use criterion::{criterion_group, criterion_main, Criterion};
use qhopf_core::confluence::check_confluence_with;
use qhopf_core::ktheory::{pairing_grid, KHomClass};
use qhopf_core::par::Parallelism;
use qhopf_core::presentation::PresId;
use std::hint::black_box;

fn bench_confluence(c: &mut Criterion) {
    let mut group = c.benchmark_group("confluence_suq2_len5");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let rep = check_confluence_with(PresId::SuQ2, 5, 0, Parallelism::Sequential);
            assert!(rep.passed());
            black_box(rep.words_checked)
        })
    });
    group.bench_function("rayon", |b| {
        b.iter(|| {
            let rep = check_confluence_with(PresId::SuQ2, 5, 0, Parallelism::Rayon);
            assert!(rep.passed());
            black_box(rep.words_checked)
        })
    });
    group.finish();
}

fn bench_pairing_grid(c: &mut Criterion) {
    let ns: Vec<i64> = (-5..=5).collect();
    let qs = [0.25, 0.5, 0.75];
    let mut group = c.benchmark_group("winding_grid_33");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let grid = pairing_grid(
                KHomClass::IdEps,
                &ns,
                &qs,
                128,
                1e-9,
                Parallelism::Sequential,
            )
            .unwrap();
            black_box(grid.len())
        })
    });
    group.bench_function("rayon", |b| {
        b.iter(|| {
            let grid =
                pairing_grid(KHomClass::IdEps, &ns, &qs, 128, 1e-9, Parallelism::Rayon).unwrap();
            black_box(grid.len())
        })
    });
    group.finish();
}

criterion_group!(benches, bench_confluence, bench_pairing_grid);
criterion_main!(benches);
