use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symgen::moments::expected_n;
use symgen::sampling::{sample_class, sample_uniform};
use symgen::{classify, orbit_census, ClassifyOptions, CycleType, RandomSource};

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_census");
    for n in [10_000usize, 100_000] {
        let mut rng = RandomSource::new(1, 0);
        let p = sample_uniform(n, &mut rng);
        let q = sample_uniform(n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| orbit_census(black_box(&p), black_box(&q)).unwrap())
        });
    }
    group.finish();
}

fn classify_pairs(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    for n in [1_000usize, 10_000] {
        let t = CycleType::full_cycle(n);
        let mut rng = RandomSource::new(2, 0);
        let p = sample_class(&t, &mut rng);
        let q = sample_uniform(n, &mut rng);
        let opts = ClassifyOptions::default();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| classify(black_box(&p), black_box(&q), &opts, &mut rng).unwrap())
        });
    }
    group.finish();
}

fn exact_moments(c: &mut Criterion) {
    let t: CycleType = "1^10,2^45".parse().unwrap();
    let t2: CycleType = "1^4,2^3,3^30".parse().unwrap();
    c.bench_function("expected_n_k_max_6", |b| {
        b.iter(|| expected_n(black_box(&t), black_box(&t2), 6).unwrap())
    });
}

criterion_group!(benches, census, classify_pairs, exact_moments);
criterion_main!(benches);
