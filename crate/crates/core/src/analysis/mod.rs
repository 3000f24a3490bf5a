//! Blockade metrics on trajectories: leakage into eliminated and blocked
//! levels, transfer fidelity, fitted Raman frequency and regime checks.

mod scenario;
mod spectrum;
mod sweep;

pub use scenario::{RunSettings, Scenario, ScenarioRun};
pub use spectrum::{dominant_frequency, FLAT_TOL};
pub use sweep::{build_grid, sweep, SweepAxis, SweepRow};

use serde::{Deserialize, Serialize};

use crate::collective::OUTSIDE_LABEL;
use crate::error::{Error, Result};
use crate::model::{DriveParams, Trajectory};
use crate::reduction::{light_shifts_first_order, LadderKind, DEFAULT_REGIME_RATIO};

/// Largest Raman frequency over blockade shift still counted as blockaded.
pub const BLOCKADE_MAX_RATIO: f64 = 0.2;

/// Which trajectory columns play which part in a Raman ladder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleMap {
    pub initial: String,
    pub target: String,
    /// Levels that should stay empty because they are far detuned.
    pub excited: Vec<String>,
    /// Levels that should stay empty because of the blockade.
    pub blocked: Vec<String>,
}

fn owned(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

impl RoleMap {
    pub fn five_level() -> Self {
        RoleMap {
            initial: "1".into(),
            target: "3".into(),
            excited: owned(&["2", "4"]),
            blocked: owned(&["5"]),
        }
    }

    pub fn collective_six() -> Self {
        RoleMap {
            initial: "A".into(),
            target: "C1".into(),
            excited: owned(&["G1", "G11", "G12"]),
            blocked: owned(&["C2"]),
        }
    }

    pub fn effective_three_single() -> Self {
        RoleMap {
            initial: "1".into(),
            target: "3".into(),
            excited: Vec::new(),
            blocked: owned(&["5"]),
        }
    }

    pub fn effective_three_collective() -> Self {
        RoleMap {
            initial: "A".into(),
            target: "C1".into(),
            excited: Vec::new(),
            blocked: owned(&["C2"]),
        }
    }

    /// Full-ensemble dynamics projected onto the six-level states; whatever
    /// lands outside them counts as excited leakage.
    pub fn projected() -> Self {
        let mut roles = Self::collective_six();
        roles.excited.push(OUTSIDE_LABEL.into());
        roles
    }

    fn index(traj: &Trajectory, label: &str) -> Result<usize> {
        traj.index_of(label)
            .ok_or_else(|| Error::InvalidTrajectory(format!("trajectory has no level labelled {label:?}")))
    }
}

/// Whether the parameters sit where the effective models apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeFlags {
    /// |δ| is at least five times the largest Rabi frequency.
    pub adiabatic: bool,
    /// Raman frequency is at most a fifth of the blockade detuning.
    pub blockade: bool,
    /// |δ| over the largest Rabi frequency; absent when nothing is driven.
    pub adiabatic_ratio: Option<f64>,
    /// Raman frequency over blockade detuning; absent when the detuning
    /// vanishes.
    pub blockade_ratio: Option<f64>,
}

impl RegimeFlags {
    /// For the single atom the blocked step is detuned by `ε₁ + ε₂`; for
    /// the ensemble by the blockade shift Δ_B.
    pub fn evaluate(p: &DriveParams, ladder: LadderKind) -> Self {
        let d = p.delta().abs();
        let largest = match ladder {
            LadderKind::SingleAtom => p.omega1().max(p.omega2()),
            LadderKind::Collective => {
                ((p.n_atoms() as f64).sqrt() * p.omega1()).max(std::f64::consts::SQRT_2 * p.omega2())
            }
        };
        let adiabatic_ratio = (largest > 0.0).then(|| d / largest);
        let adiabatic = d > 0.0 && adiabatic_ratio.map_or(true, |r| r >= DEFAULT_REGIME_RATIO);

        let blockade_ratio = light_shifts_first_order(p).ok().and_then(|ls| {
            let (rabi, shift) = match ladder {
                LadderKind::SingleAtom => (ls.omega_r, ls.eps1 + ls.eps2),
                LadderKind::Collective => (ls.omega_ro, ls.delta_b),
            };
            (shift != 0.0).then(|| rabi.abs() / shift.abs())
        });
        let blockade = blockade_ratio.is_some_and(|r| r <= BLOCKADE_MAX_RATIO);
        RegimeFlags {
            adiabatic,
            blockade,
            adiabatic_ratio,
            blockade_ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockadeReport {
    pub max_leak_excited: f64,
    pub max_leak_blocked: f64,
    /// Angular frequency of the target population; absent when it does not
    /// oscillate.
    pub rabi_frequency_fit: Option<f64>,
    pub transfer_fidelity: f64,
    pub regime_flags: Option<RegimeFlags>,
}

impl BlockadeReport {
    pub fn with_regime_flags(mut self, flags: RegimeFlags) -> Self {
        self.regime_flags = Some(flags);
        self
    }
}

fn max_summed(traj: &Trajectory, cols: &[usize]) -> f64 {
    // an empty f64 sum is −0.0
    if cols.is_empty() {
        return 0.0;
    }
    traj.populations()
        .iter()
        .map(|row| cols.iter().map(|&c| row[c]).sum::<f64>())
        .fold(0.0, f64::max)
        .min(1.0)
}

pub fn blockade_report(traj: &Trajectory, roles: &RoleMap) -> Result<BlockadeReport> {
    RoleMap::index(traj, &roles.initial)?;
    let target = RoleMap::index(traj, &roles.target)?;
    let excited = roles
        .excited
        .iter()
        .map(|l| RoleMap::index(traj, l))
        .collect::<Result<Vec<_>>>()?;
    let blocked = roles
        .blocked
        .iter()
        .map(|l| RoleMap::index(traj, l))
        .collect::<Result<Vec<_>>>()?;

    let series = traj.series(target);
    Ok(BlockadeReport {
        max_leak_excited: max_summed(traj, &excited),
        max_leak_blocked: max_summed(traj, &blocked),
        rabi_frequency_fit: dominant_frequency(traj.times(), &series)?,
        transfer_fidelity: series.iter().copied().fold(0.0, f64::max).min(1.0),
        regime_flags: None,
    })
}
