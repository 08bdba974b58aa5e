use std::hint::black_box;

use anyon_bench::{mixed, tau, two_sector};
use anyon_core::entanglement::e1_ncopy;
use anyon_core::protocols::{dilute, distill, typical_set};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn ncopy(c: &mut Criterion) {
    let s = two_sector();
    let mut group = c.benchmark_group("e1_ncopy");
    for n in [10, 100, 1000, 10_000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| e1_ncopy(black_box(&s), n))
        });
    }
    group.finish();
}

fn typical(c: &mut Criterion) {
    let s = mixed();
    let mut group = c.benchmark_group("typical_set");
    for n in [20, 80, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| typical_set(&s, n, 0.05).unwrap())
        });
    }
    group.finish();
}

fn protocols(c: &mut Criterion) {
    let s = two_sector();
    let t = tau(s.model());
    let mut group = c.benchmark_group("protocols");
    group.sample_size(20);
    for n in [20, 40] {
        group.bench_with_input(BenchmarkId::new("distill", n), &n, |b, &n| {
            b.iter(|| distill(&s, n, 0.05, &[t]).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dilute", n), &n, |b, &n| {
            b.iter(|| dilute(&s, n, 0.05, &[t]).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ncopy, typical, protocols);
criterion_main!(benches);
