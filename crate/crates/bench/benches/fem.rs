use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gbc_core::fem::{assemble, build_mesh, pcg, solution_errors, FemSettings, DEFAULT_SOLVER_TOL};
use gbc_core::interp::{QuadratureSettings, TestField};

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble");
    group.sample_size(10);
    for n in [4, 16] {
        let mesh = build_mesh(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &mesh, |b, mesh| {
            b.iter(|| assemble(mesh, &TestField::SinExp, QuadratureSettings::ASSEMBLY).unwrap())
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("pcg");
    for n in [16, 32] {
        let system = assemble(&build_mesh(n).unwrap(), &TestField::SinExp, QuadratureSettings::ASSEMBLY).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &system, |b, s| {
            b.iter(|| pcg(&s.matrix, &s.rhs, DEFAULT_SOLVER_TOL, None).unwrap())
        });
    }
    group.finish();
}

fn norms(c: &mut Criterion) {
    let mesh = build_mesh(8).unwrap();
    let coeffs: Vec<f64> = mesh.nodes.iter().map(|p| p.x * p.y).collect();
    let settings = FemSettings::default();
    c.bench_function("error_norms/8", |b| {
        b.iter(|| solution_errors(&mesh, &coeffs, &TestField::SinExp, &settings).unwrap())
    });
}

criterion_group!(benches, assembly, solve, norms);
criterion_main!(benches);
