//! Leakage scaling of the five-level ladder across parameter sweeps.

use lsiib_core::analysis::{build_grid, sweep, SweepAxis};
use lsiib_core::{BlockadeReport, DriveParams, RunSettings, Scenario};

fn base() -> DriveParams {
    DriveParams::single_atom(1.0, 0.1, 10.0, 0.0).unwrap()
}

fn reports(axis: SweepAxis, values: &[f64]) -> Vec<(f64, BlockadeReport)> {
    let grid = build_grid(base(), &[(axis, values.to_vec())], None).unwrap();
    sweep(&grid, Scenario::SingleAtomFiveLevel, &RunSettings::default(), None)
        .unwrap()
        .into_iter()
        .map(|row| (axis.value(&row.params), row.outcome.unwrap()))
        .collect()
}

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::MIN, f64::max);
    let min = xs.iter().copied().fold(f64::MAX, f64::min);
    max / min
}

#[test]
fn blocked_leak_grows_quadratically_with_weak_leg() {
    let rows = reports(SweepAxis::Omega2, &[0.05, 0.1, 0.2, 0.4]);
    let leaks: Vec<f64> = rows.iter().map(|(_, r)| r.max_leak_blocked).collect();
    assert!(leaks.windows(2).all(|w| w[1] > w[0]), "{leaks:?}");
    let normalized: Vec<f64> = rows.iter().map(|(o2, r)| r.max_leak_blocked / (o2 * o2)).collect();
    assert!(spread(&normalized) < 2.0, "{normalized:?}");
}

#[test]
fn excited_leak_falls_quadratically_with_detuning() {
    let rows = reports(SweepAxis::Delta, &[5.0, 10.0, 20.0, 40.0]);
    let leaks: Vec<f64> = rows.iter().map(|(_, r)| r.max_leak_excited).collect();
    assert!(leaks.windows(2).all(|w| w[1] < w[0]), "{leaks:?}");
    let normalized: Vec<f64> = rows.iter().map(|(d, r)| r.max_leak_excited * d * d).collect();
    assert!(spread(&normalized) < 2.0, "{normalized:?}");
}

#[test]
fn fitted_frequency_tracks_raman_frequency() {
    for (d, r) in reports(SweepAxis::Delta, &[5.0, 10.0, 20.0, 40.0]) {
        let omega_r = 0.1 / (2.0 * d);
        let fit = r.rabi_frequency_fit.unwrap();
        assert!((fit - omega_r).abs() / omega_r < 0.1, "delta {d}: {fit} vs {omega_r}");
    }
}

#[test]
fn single_point_grid_gives_single_row() {
    let rows = sweep(&[base()], Scenario::SingleAtomFiveLevel, &RunSettings::default(), Some(1)).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].index, 0);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let grid = build_grid(base(), &[(SweepAxis::Omega2, vec![0.05, 0.1, 0.2])], None).unwrap();
    let run = |threads| {
        sweep(&grid, Scenario::SingleAtomFiveLevel, &RunSettings::default(), Some(threads))
            .unwrap()
            .into_iter()
            .map(|r| r.outcome.unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(1), run(3));
}
