use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gbc_core::coords::{gradients, sup_gradient_scan, values, CoordinateKind};
use gbc_core::{Polygon, Vec2};

fn pointwise(c: &mut Criterion) {
    let mut group = c.benchmark_group("pointwise");
    let x = Vec2::new(0.1, 0.2);
    for n in [5, 8, 16] {
        let p = Polygon::regular(n, 1.0, Vec2::ZERO).unwrap();
        for kind in CoordinateKind::ALL {
            group.bench_with_input(BenchmarkId::new(format!("values/{kind}"), n), &p, |b, p| {
                b.iter(|| values(p, black_box(x), kind).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("gradients/{kind}"), n), &p, |b, p| {
                b.iter(|| gradients(p, black_box(x), kind).unwrap())
            });
        }
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("pentagon_scan");
    group.sample_size(10);
    let p = Polygon::pentagon(1.05).unwrap();
    for kind in CoordinateKind::ALL {
        group.bench_function(kind.name(), |b| b.iter(|| sup_gradient_scan(&p, kind, 128, 1e-4).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, pointwise, scan);
criterion_main!(benches);
