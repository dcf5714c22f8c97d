//! Benchmarks for the numerical kernels on the hot paths: special
//! functions, the two covariance routes, increment variances, and the
//! samplers.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hfbm_core::specfun::{self, quad};
use hfbm_core::{
    covariance_closed, covariance_matrix, covariance_quadrature, increment_variance,
    sample_cholesky, sample_volterra, volterra_discrete_terminal_variance, AlphaParam,
    QuadratureConfig, TimeGrid,
};

fn specfun_benches(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    c.bench_function("gamma", |b| {
        b.iter(|| specfun::gamma(black_box(2.37)).unwrap())
    });
    c.bench_function("regularized_gamma_pair", |b| {
        b.iter(|| specfun::regularized_gamma_pair(black_box(0.75), black_box(1.3)).unwrap())
    });
    c.bench_function("tricomi_psi", |b| {
        b.iter(|| {
            specfun::tricomi_psi(black_box(0.25), black_box(0.5), black_box(0.8), &cfg).unwrap()
        })
    });
    c.bench_function("tanh_sinh_unit_quartic", |b| {
        b.iter(|| quad::tanh_sinh(&|x: f64| x * x * (1.0 - x) * (1.0 - x), 0.0, 1.0, &cfg).unwrap())
    });
}

fn covariance_benches(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let sub = AlphaParam::new(0.5).unwrap();
    let sup = AlphaParam::new(1.5).unwrap();
    c.bench_function("covariance_quadrature_sub", |b| {
        b.iter(|| covariance_quadrature(&sub, black_box(1.0), black_box(2.0), &cfg).unwrap())
    });
    c.bench_function("covariance_quadrature_super", |b| {
        b.iter(|| covariance_quadrature(&sup, black_box(1.0), black_box(2.0), &cfg).unwrap())
    });
    c.bench_function("covariance_closed_sub", |b| {
        b.iter(|| covariance_closed(&sub, black_box(1.0), black_box(2.0)).unwrap())
    });
    c.bench_function("increment_variance_short_gap", |b| {
        b.iter(|| increment_variance(&sup, black_box(1.0), black_box(1.01), &cfg).unwrap())
    });
    c.bench_function("covariance_matrix_16", |b| {
        let grid = TimeGrid::uniform(1.0, 16).unwrap();
        b.iter(|| covariance_matrix(&sub, &grid, &cfg).unwrap())
    });
}

fn sampler_benches(c: &mut Criterion) {
    let sub = AlphaParam::new(0.5).unwrap();
    c.bench_function("volterra_weights_256", |b| {
        b.iter(|| volterra_discrete_terminal_variance(&sub, 1.0, black_box(256)).unwrap())
    });
    c.bench_function("sample_volterra_64x8", |b| {
        let grid = TimeGrid::uniform(1.0, 64).unwrap();
        b.iter(|| sample_volterra(&sub, &grid, 8, black_box(42)).unwrap())
    });
    c.bench_function("sample_cholesky_16x8", |b| {
        let grid = TimeGrid::uniform(1.0, 16).unwrap();
        b.iter(|| sample_cholesky(&sub, &grid, 8, black_box(42)).unwrap())
    });
}

criterion_group!(
    benches,
    specfun_benches,
    covariance_benches,
    sampler_benches
);
criterion_main!(benches);
