//! Wall-time benchmarks of the exact kernel, the samplers and the statistics.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sbo_core::probkernel::{chain_prob, insertion_rank_pmf};
use sbo_core::samplers::{rng_from_seed, transition_matrix_tsetlin, SizeProfile};
use sbo_core::stats::count_inversions;
use sbo_core::SizeFunction;

fn kernel(c: &mut Criterion) {
    let sizes: Vec<f64> = (1..=64).map(|i| 1.0 + (i as f64).sqrt()).collect();
    c.bench_function("chain_prob/64", |b| b.iter(|| chain_prob(black_box(&sizes)).unwrap()));
    c.bench_function("insertion_rank_pmf/64", |b| b.iter(|| insertion_rank_pmf(black_box(&sizes), 3.5).unwrap()));
    let desc = SizeFunction::table(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    c.bench_function("transition_matrix_tsetlin/6", |b| {
        b.iter(|| transition_matrix_tsetlin(black_box(&[1, 2, 3, 4, 5, 6]), &desc).unwrap())
    });
}

fn samplers(c: &mut Criterion) {
    let desc = SizeFunction::power(1.0).unwrap();
    let mut group = c.benchmark_group("samplers");
    for n in [100, 1000] {
        let profile = SizeProfile::new(&desc, n).unwrap();
        let mut rng = rng_from_seed(1);
        group.bench_with_input(BenchmarkId::new("exponential", n), &n, |b, _| b.iter(|| profile.exponential(&mut rng)));
        group.bench_with_input(BenchmarkId::new("picks", n), &n, |b, _| b.iter(|| profile.by_picks(&mut rng).unwrap()));
        group.bench_with_input(BenchmarkId::new("insertion", n), &n, |b, _| {
            b.iter(|| profile.by_insertion(&mut rng).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("scatter", n), &n, |b, _| {
            b.iter(|| profile.poisson_scatter(&mut rng).unwrap())
        });
    }
    group.finish();
}

fn inversions(c: &mut Criterion) {
    let desc = SizeFunction::geometric(0.5).unwrap();
    let mut group = c.benchmark_group("count_inversions");
    for n in [1_000, 20_000] {
        let order = SizeProfile::new(&desc, n).unwrap().exponential(&mut rng_from_seed(2));
        group.bench_with_input(BenchmarkId::from_parameter(n), &order, |b, o| b.iter(|| count_inversions(black_box(o))));
    }
    group.finish();
}

criterion_group!(benches, kernel, samplers, inversions);
criterion_main!(benches);
