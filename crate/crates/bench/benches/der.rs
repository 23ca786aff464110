// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use der_bench::{karate, two_block_graph};
use der_core::der::{random_equal_partition, Der};
use der_core::diffusion::walk_measures;
use der_core::ensemble::run_repeats;
use der_core::DerConfig;

fn bench_walk_measures(c: &mut Criterion) {
    let g = two_block_graph(1000, 0.05, 0.01);
    let mut group = c.benchmark_group("walk_measures");
    for l in [1usize, 2, 3] {
        group.bench_with_input(BenchmarkId::from_parameter(l), &l, |b, &l| {
            b.iter(|| walk_measures(&g, l).unwrap())
        });
    }
    group.finish();
}

fn bench_iteration(c: &mut Criterion) {
    let g = two_block_graph(1000, 0.3, 0.1);
    let der = Der::new(&g, 1).unwrap();
    let init = random_equal_partition(der.n_active(), 2, 7).unwrap();
    c.bench_function("means_and_assign_n1000", |b| {
        b.iter(|| {
            let mu = der.means_step(&init);
            der.assign_step(&init, &mu)
        })
    });
}

fn bench_karate_repeats(c: &mut Criterion) {
    let g = karate();
    let cfg = DerConfig { seed: 7, ..DerConfig::new(2, 3) };
    c.bench_function("karate_15_repeats", |b| b.iter(|| run_repeats(&g, &cfg, 15).unwrap()));
}

criterion_group!(benches, bench_walk_measures, bench_iteration, bench_karate_repeats);
criterion_main!(benches);
