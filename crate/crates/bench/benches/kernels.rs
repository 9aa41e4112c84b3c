use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kuhn3::catalog::instantiate;
use kuhn3::stability::jacobian;
use kuhn3::{
    classify, classify_equilibrium, expected_profit, expected_profit_bruteforce, gradient, integrate,
    ClassifyConfig, FreeParams, Gains, IntegrateConfig, SolutionId,
};
use kuhn3_bench::{interior_profile, pot};

fn profits(c: &mut Criterion) {
    let s = interior_profile();
    let p = pot(3.3);
    c.bench_function("expected_profit", |b| b.iter(|| expected_profit(black_box(&s), p)));
    c.bench_function("expected_profit_bruteforce", |b| {
        b.iter(|| expected_profit_bruteforce(black_box(&s), p))
    });
    c.bench_function("gradient", |b| b.iter(|| gradient(black_box(&s), p)));
}

fn stability(c: &mut Criterion) {
    let p = pot(4.65);
    let s = instantiate(SolutionId::S9, p, &FreeParams::midpoint()).unwrap();
    c.bench_function("jacobian", |b| b.iter(|| jacobian(black_box(&s), p, &Gains::default())));
    c.bench_function("classify_equilibrium", |b| {
        b.iter(|| classify_equilibrium(SolutionId::S9, black_box(p), &FreeParams::midpoint()).unwrap())
    });
}

fn dynamics(c: &mut Criterion) {
    let s = interior_profile();
    let p = pot(2.5);
    let cfg = IntegrateConfig::default();
    let mut group = c.benchmark_group("dynamics");
    group.sample_size(20);
    group.bench_function("integrate_t200", |b| {
        b.iter(|| integrate(black_box(&s), p, &Gains::default(), 200.0, &cfg).unwrap())
    });
    let traj = integrate(&s, p, &Gains::default(), 2000.0, &cfg).unwrap();
    group.bench_function("classify_t2000", |b| {
        b.iter(|| classify(black_box(&traj), &ClassifyConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, profits, stability, dynamics);
criterion_main!(benches);
