use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use swe_bench::fixture;
use swe_core::fem::assemble_mass;
use swe_core::linalg::{cg_solve, default_maxit};
use swe_core::timeint::rk4_step;
use swe_core::{ElementFamily, Params};

const N: usize = 16;

fn tendency(c: &mut Criterion) {
    let mut group = c.benchmark_group("tendency");
    for fam in ElementFamily::ALL {
        let (scheme, state) = fixture(fam, N);
        let params = Params::new(5.0, 5.0);
        group.bench_with_input(BenchmarkId::from_parameter(fam), &fam, |b, _| {
            b.iter(|| scheme.tendency(black_box(&state), &params).unwrap())
        });
    }
    group.finish();
}

fn mass_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("mass_assembly");
    for fam in ElementFamily::ALL {
        let (scheme, state) = fixture(fam, N);
        group.bench_with_input(BenchmarkId::new("velocity", fam), &fam, |b, _| {
            b.iter(|| assemble_mass(scheme.s(), None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("depth_weighted_pv", fam), &fam, |b, _| {
            b.iter(|| assemble_mass(scheme.e(), Some(&state.h)).unwrap())
        });
    }
    group.finish();
}

fn conjugate_gradient(c: &mut Criterion) {
    let mut group = c.benchmark_group("cg_velocity_mass");
    for fam in ElementFamily::ALL {
        let (scheme, state) = fixture(fam, N);
        let m = scheme.mass_s();
        let b = m.matvec(state.u.coeffs());
        let maxit = default_maxit(b.len());
        group.bench_with_input(BenchmarkId::from_parameter(fam), &fam, |bch, _| {
            bch.iter(|| cg_solve(m, black_box(&b), 1e-12, maxit).unwrap())
        });
    }
    group.finish();
}

fn rk4(c: &mut Criterion) {
    let mut group = c.benchmark_group("rk4_step");
    group.sample_size(20);
    for fam in ElementFamily::ALL {
        let (scheme, state) = fixture(fam, N);
        let params = Params::new(5.0, 5.0).with_apvm(5e-4);
        group.bench_with_input(BenchmarkId::from_parameter(fam), &fam, |b, _| {
            b.iter(|| rk4_step(&scheme, black_box(&state), &params, 1e-3).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, tendency, mass_assembly, conjugate_gradient, rk4);
criterion_main!(benches);
