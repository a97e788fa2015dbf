//! Benchmarks over the hot paths: surface-potential solves, full curve
//! generation, noisy sweeps, and the two-parameter fit.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use moscap_bench::{reference_stack, stack_with};
use moscap_core::curve::Regime;
use moscap_core::fit::{fit_cv, FreeParameter};
use moscap_core::model;
use moscap_core::sweep::{simulate_sweep, SweepPlan};

fn grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let step = (stop - start) / (count - 1) as f64;
    (0..count).map(|i| start + i as f64 * step).collect()
}

fn bench_surface_potential(c: &mut Criterion) {
    let stack = reference_stack();
    c.bench_function("surface_potential_mid_depletion", |b| {
        b.iter(|| model::surface_potential(black_box(&stack), black_box(3.0)).unwrap())
    });
    c.bench_function("surface_potential_strong_inversion", |b| {
        b.iter(|| model::surface_potential(black_box(&stack), black_box(12.0)).unwrap())
    });
}

fn bench_curves(c: &mut Criterion) {
    let stack = reference_stack();
    let biases = grid(-5.0, 9.0, 1001);
    for regime in [Regime::HighFrequency, Regime::LowFrequency, Regime::DeepDepletion] {
        c.bench_function(&format!("curve_1001_{}", regime.as_str()), |b| {
            b.iter(|| model::cv_curve(black_box(&stack), black_box(&biases), regime).unwrap())
        });
    }
}

fn bench_sweep(c: &mut Criterion) {
    let stack = reference_stack();
    let plan =
        SweepPlan::new(-5.0, 5.0, 0.01, Regime::HighFrequency, 5e-14, 42, 0).unwrap();
    c.bench_function("noisy_sweep_1001", |b| {
        b.iter(|| simulate_sweep(black_box(&stack), black_box(&plan)).unwrap())
    });
}

fn bench_fit(c: &mut Criterion) {
    let truth = reference_stack();
    let v_fb = model::flat_band_voltage(&truth).unwrap();
    let v_t = model::threshold_voltage(&truth).unwrap();
    let biases = grid(v_fb - 2.0, v_t + 1.0, 81);
    let measured = model::cv_curve(&truth, &biases, Regime::HighFrequency).unwrap();
    let initial = stack_with(650.0, 3e16);
    c.bench_function("fit_thickness_and_doping_81pts", |b| {
        b.iter(|| {
            fit_cv(
                black_box(&measured),
                black_box(&initial),
                &[FreeParameter::OxideThickness, FreeParameter::Doping],
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, bench_surface_potential, bench_curves, bench_sweep, bench_fit);
criterion_main!(benches);
