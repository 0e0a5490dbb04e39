use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use trefoil_bench::{alpha_theta_grid, analyze_all, relator_sweep, surgery_table};
use trefoil_core::holonomy::generators_ab;
use trefoil_core::metric::isometry_pullback_test;
use trefoil_core::surgery::plot::{p1_csv, Which, Window};

fn holonomy(c: &mut Criterion) {
    c.bench_function("generators_ab", |b| {
        b.iter(|| generators_ab(black_box(0.9), black_box(0.4)))
    });
    let grid = alpha_theta_grid(50);
    c.bench_function("relator_grid_50x50", |b| {
        b.iter(|| relator_sweep(black_box(&grid)))
    });
}

fn metric(c: &mut Criterion) {
    let pair = generators_ab(0.3, 0.7).expect("valid parameters");
    c.bench_function("pullback_200", |b| {
        b.iter(|| isometry_pullback_test(black_box(&pair.a_lm), pair.s, 200, 1))
    });
}

fn surgery(c: &mut Criterion) {
    let table = surgery_table(20, 20, 12);
    c.bench_function("analyze_table", |b| {
        b.iter(|| analyze_all(black_box(&table)))
    });
    let w = Window::default_for(Which::P1);
    c.bench_function("p1_csv", |b| b.iter(|| p1_csv(black_box(&w), 0.25)));
}

criterion_group!(benches, holonomy, metric, surgery);
criterion_main!(benches);
