use std::hint::black_box;

use arsm_core::boa::SeriesOptions;
use arsm_core::spectrum::{self, LevelOptions};
use arsm_core::u1::{self, Branch, U1Params};
use arsm_core::{CouplingFamily, Execution, ModelParams, StarkSign};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn g_curve(c: &mut Criterion) {
    let p = ModelParams::new(0.7, 0.8, 0.4, 0.2).unwrap();
    let energies: Vec<f64> = (0..2000).map(|i| -2.0 + 5.0 * i as f64 / 1999.0).collect();
    let series = SeriesOptions::default();
    let mut group = c.benchmark_group("g_curve");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| spectrum::g_curve(&p, black_box(&energies), &series, exec))
        });
    }
    group.finish();
}

fn level_sweep(c: &mut Criterion) {
    let fam = CouplingFamily::new(0.7, 0.2, 0.5);
    let g1s: Vec<f64> = (1..=32).map(|i| 0.05 * i as f64).collect();
    let opts = LevelOptions::default();
    let mut group = c.benchmark_group("level_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| spectrum::level_sweep(&fam, black_box(&g1s), (-3.0, 2.0), &opts, exec))
        });
    }
    group.finish();
}

fn unity_stark(c: &mut Criterion) {
    let base = U1Params::new(0.5, 0.3, 0.5, StarkSign::Plus).unwrap();
    let ac = u1::critical_alpha(&base).unwrap();
    let alphas: Vec<f64> = (0..256)
        .map(|i| 0.05 + (ac - 0.06) * i as f64 / 255.0)
        .collect();
    let mut group = c.benchmark_group("u1");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("branch_sweep", name), &exec, |b, &exec| {
            b.iter(|| u1::branch_sweep(&base, black_box(&alphas), Branch::Lower, 20, exec))
        });
        group.bench_with_input(BenchmarkId::new("gap_fit", name), &exec, |b, &exec| {
            b.iter(|| u1::gap_fit(&base, (1e-4, 1e-1), 64, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, g_curve, level_sweep, unity_stark);
criterion_main!(benches);
