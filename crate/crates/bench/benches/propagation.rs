use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lsiib_core::analysis::{build_grid, sweep, SweepAxis};
use lsiib_core::collective::{build_collective_state, coupling_matrix_element};
use lsiib_core::hamiltonians::{build_five_level, CollectiveLabel};
use lsiib_core::{propagate, DriveParams, LadderKind, PropagationConfig, PropagationMethod, QuantumState, RunSettings, Scenario};

fn five_level(c: &mut Criterion) {
    let p = DriveParams::single_atom(1.0, 0.1, 10.0, 0.0).unwrap();
    let h = build_five_level(&p);
    let psi = QuantumState::basis_of(&h, "1").unwrap();
    let cfg = PropagationConfig::over_periods(0.005, 3.0, 2000).unwrap();
    let mut g = c.benchmark_group("five_level");
    g.bench_function("eigendecomposition", |b| b.iter(|| propagate(black_box(&h), &psi, &cfg).unwrap()));
    let taylor = cfg.with_method(PropagationMethod::ScaledExpm);
    g.bench_function("scaled_expm", |b| b.iter(|| propagate(black_box(&h), &psi, &taylor).unwrap()));
    g.finish();
}

fn full_ensemble(c: &mut Criterion) {
    let mut g = c.benchmark_group("full_ensemble");
    g.sample_size(10);
    let settings = RunSettings {
        n_steps: 200,
        ..RunSettings::default()
    };
    for n in [4usize, 5, 6] {
        let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, n).unwrap();
        g.bench_with_input(BenchmarkId::new("run", n), &p, |b, p| {
            b.iter(|| Scenario::FullEnsemble.run(black_box(p), &settings).unwrap())
        });
    }
    g.finish();
}

fn couplings(c: &mut Criterion) {
    let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, 8).unwrap();
    let c2 = build_collective_state(CollectiveLabel::C2, 8).unwrap();
    let g12 = build_collective_state(CollectiveLabel::G12, 8).unwrap();
    c.bench_function("coupling_element_n8", |b| {
        b.iter(|| coupling_matrix_element(black_box(&g12), &c2, &p).unwrap())
    });
}

fn parameter_sweep(c: &mut Criterion) {
    let base = DriveParams::new(1.0, 0.1, 10.0, 0.0, 10).unwrap();
    let axes = vec![
        (SweepAxis::Omega2, vec![0.05, 0.1, 0.2, 0.4]),
        (SweepAxis::Delta, vec![10.0, 20.0, 40.0, 80.0]),
    ];
    let grid = build_grid(base, &axes, Some(LadderKind::Collective)).unwrap();
    let settings = RunSettings::default();
    let mut g = c.benchmark_group("sweep_collective_16");
    g.sample_size(10);
    for threads in [1usize, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| sweep(black_box(&grid), Scenario::CollectiveSixLevel, &settings, Some(t)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, five_level, full_ensemble, couplings, parameter_sweep);
criterion_main!(benches);
