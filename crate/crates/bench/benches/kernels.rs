use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use kmtheta::errfn::{e2_flat, tilde_e2};
use kmtheta::fixture;
use kmtheta::geometry::{surface_spec, SurfaceChart};
use kmtheta::{Coset, QuadratureSpec, TauPoint, ThetaContext, Vector};

fn error_functions(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    c.bench_function("e2_flat", |b| {
        b.iter(|| e2_flat(black_box(0.4), black_box(0.7), black_box(-1.3), &spec).unwrap())
    });
    c.bench_function("tilde_e2", |b| {
        b.iter(|| tilde_e2(black_box(0.6), black_box(0.3), &spec).unwrap())
    });
}

fn surface(c: &mut Criterion) {
    let chart = SurfaceChart::new(fixture::canonical_config()).unwrap();
    let ctx = ThetaContext::new(
        fixture::fixture_lattice(),
        fixture::canonical_config(),
        QuadratureSpec::default(),
    )
    .unwrap();
    let x = Vector::new(vec![0.9, -1.2, 0.4, 1.7]);
    let spec = surface_spec();
    c.bench_function("closed_form_i", |b| b.iter(|| ctx.closed_form_i(black_box(&x)).unwrap()));
    c.bench_function("surface_integral_phi", |b| {
        b.iter(|| chart.surface_integral_phi(black_box(&x), &spec).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let ctx = ThetaContext::new(
        fixture::fixture_lattice(),
        fixture::canonical_config(),
        QuadratureSpec::default(),
    )
    .unwrap();
    let mu: Coset = "[1/2,1/2,0,0]".parse().unwrap();
    let tau = TauPoint::new(0.3, 1.1).unwrap();
    let mut group = c.benchmark_group("series");
    group.sample_size(10);
    group.bench_function("holomorphic_part_q5", |b| {
        b.iter(|| ctx.holomorphic_part(&mu, 5.0).unwrap())
    });
    group.bench_function("completed_theta_q3", |b| {
        b.iter(|| ctx.completed_theta(&mu, tau, 3.0, f64::INFINITY).unwrap())
    });
    group.finish();
}

criterion_group!(benches, error_functions, surface, series);
criterion_main!(benches);
