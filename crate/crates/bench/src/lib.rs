use std::hint::black_box;

use criterion::{BenchmarkId, Criterion, Throughput};
use dirac_hardy::angular::{spectrum_bruteforce, DEFAULT_BASIS_CAP};
use dirac_hardy::radial::{
    assemble_mode_pencil, constrained_min_eigenvalue, min_eigenvalue, ConstraintSpec, Weight, BISECTION_TOL,
};
use dirac_hardy::{build_generators, hardy_constant, ModeProblem, RadialGrid};

pub fn benchmarks(c: &mut Criterion) {
    min_eigenvalue_by_size(c);
    constrained_solve(c);
    constants(c);
    spectrum(c);
}

fn min_eigenvalue_by_size(c: &mut Criterion) {
    let mode = ModeProblem::new(3, -1.0, 2).unwrap();
    let mut group = c.benchmark_group("min_eigenvalue");
    for points in [999, 3999, 15999] {
        let grid = RadialGrid::new(10.0, points).unwrap();
        let pencil = assemble_mode_pencil(&grid, &mode, Weight::Hardy);
        group.throughput(Throughput::Elements(points as u64));
        group.bench_with_input(BenchmarkId::from_parameter(points), &pencil, |b, p| {
            b.iter(|| min_eigenvalue(black_box(p), BISECTION_TOL).unwrap())
        });
    }
    group.finish();
}

fn constrained_solve(c: &mut Criterion) {
    let mode = ModeProblem::new(2, 0.0, 0).unwrap();
    let grid = RadialGrid::with_spacing(20.0, 1e-3).unwrap();
    let pencil = assemble_mode_pencil(&grid, &mode, Weight::LogSquared);
    let g = ConstraintSpec::annulus_mean_zero()
        .functional(&grid, &mode)
        .unwrap()
        .expect("constraint present");
    c.bench_function("constrained_min_eigenvalue/T20", |b| {
        b.iter(|| constrained_min_eigenvalue(black_box(&pencil), black_box(&g), BISECTION_TOL).unwrap())
    });
}

fn constants(c: &mut Criterion) {
    c.bench_function("hardy_constant/n3_grid", |b| {
        b.iter(|| {
            for i in 0..=80 {
                black_box(hardy_constant(3, -4.0 + 0.1 * i as f64).unwrap());
            }
        })
    });
}

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum_bruteforce");
    group.sample_size(10);
    for (n, degree) in [(3usize, 3u32), (4, 2)] {
        let rep = build_generators(n).unwrap();
        group.bench_with_input(BenchmarkId::new(format!("n{n}"), degree), &degree, |b, &d| {
            b.iter(|| spectrum_bruteforce(black_box(&rep), d, DEFAULT_BASIS_CAP).unwrap())
        });
    }
    group.finish();
}
