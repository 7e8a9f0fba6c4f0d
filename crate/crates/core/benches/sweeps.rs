use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::prelude::*;

use udtfs::compress::{compress_with, CompressOptions};
use udtfs::fixtures;
use udtfs::pattern::{combinations, local_vc_density_check, sauer_check};
use udtfs::scheme::{compression_scheme_for, scheme_valid};
use udtfs::trace::realized_types;
use udtfs::TraceSystem;

fn all_types_sweep(sys: &TraceSystem, size: usize) -> usize {
    let opts = CompressOptions { budget: None, record_k: false };
    combinations(sys.col_count(), size)
        .par_iter()
        .map(|b| {
            realized_types(sys, b)
                .unwrap()
                .iter()
                .map(|t| compress_with(sys, b, t, &opts).unwrap().parameter_count())
                .sum::<usize>()
        })
        .sum()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("1-thread", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn bench_pools(c: &mut Criterion) {
    let intv = fixtures::intv_full();
    let chain = fixtures::chain4x3();
    let cs = compression_scheme_for(&chain).unwrap();
    let mut group = c.benchmark_group("pool");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("compress-intv-full-3", name), &pool, |bench, pool| {
            bench.iter(|| pool.install(|| all_types_sweep(&intv, 3)))
        });
        group.bench_with_input(BenchmarkId::new("vc-density-intv-full-4", name), &pool, |bench, pool| {
            bench.iter(|| pool.install(|| local_vc_density_check(&intv, 4).unwrap().pass))
        });
        group.bench_with_input(BenchmarkId::new("sauer-intv-full-4", name), &pool, |bench, pool| {
            bench.iter(|| {
                pool.install(|| combinations(intv.col_count(), 4).par_iter().all(|b| sauer_check(&intv, b).unwrap()))
            })
        });
        group.bench_with_input(BenchmarkId::new("scheme-valid-chain-3", name), &pool, |bench, pool| {
            bench.iter(|| pool.install(|| scheme_valid(&chain, &cs, 3).unwrap().valid))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_pools);
criterion_main!(benches);
