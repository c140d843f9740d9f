//! Best-approximation solver costs across the three norm regimes, plus the
//! oscillatory pairing integral used by the remainder check.

use criterion::{criterion_group, criterion_main, Criterion};
use poussin::extremal::{build_phi_delta, telyakovskii_integral};
use poussin::trig::{eval_poly, SampledFunction, UniformGrid};
use poussin::{best_approx_c, best_approx_l2, best_approx_ls};
use poussin_bench::{profile, weight};
use std::hint::black_box;

fn solvers(c: &mut Criterion) {
    let t = profile(12);
    let g = UniformGrid::for_order(64);
    let sample = eval_poly(&t, &g);
    let w = weight();
    let ramp = build_phi_delta(6, w.theta(6), 1.0, 0.01).unwrap();
    let ramp_sample = SampledFunction::from_evaluator(ramp, g);

    let mut group = c.benchmark_group("best_approx");
    group.bench_function("l2_closed_form_m6", |b| {
        b.iter(|| best_approx_l2(black_box(&t), 6).unwrap().value)
    });
    group.bench_function("uniform_exchange_m6", |b| {
        b.iter(|| best_approx_c(black_box(&ramp_sample), 6).unwrap().value)
    });
    group.bench_function("smooth_ls_1p5_m6", |b| {
        b.iter(|| best_approx_ls(black_box(&sample), 6, 1.5).unwrap().value)
    });
    group.finish();
}

fn pairing_integral(c: &mut Criterion) {
    c.bench_function("oscillatory_pairing_m6", |b| {
        b.iter(|| telyakovskii_integral(6, black_box(0.1), 0.7).unwrap())
    });
}

criterion_group!(benches, solvers, pairing_integral);
criterion_main!(benches);
