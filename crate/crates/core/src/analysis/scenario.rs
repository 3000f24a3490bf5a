use crate::collective::{build_collective_state, project_trajectory, symmetric_weight};
use crate::dynamics::{propagate, PropagationConfig, PropagationMethod, DEFAULT_PERIODS, DEFAULT_STEPS};
use crate::error::Result;
use crate::hamiltonians::{build_collective_six, build_five_level, CollectiveSixBasis, FullEnsembleHamiltonian};
use crate::model::{DriveParams, HamiltonianMatrix, QuantumState, Trajectory};
use crate::reduction::{
    effective_three_level_collective, effective_three_level_single, light_shifts_first_order, CollectiveCoupling,
    LadderKind, ThreeLevelForm,
};

use super::{blockade_report, BlockadeReport, RegimeFlags, RoleMap};

/// A model to evolve from its ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    SingleAtomFiveLevel,
    CollectiveSixLevel,
    EffectiveThreeSingle(ThreeLevelForm),
    EffectiveThreeCollective(CollectiveCoupling),
    /// Brute-force 3^N dynamics, reported as populations of the six
    /// collective states plus everything outside them.
    FullEnsemble,
}

impl Scenario {
    pub fn ladder(&self) -> LadderKind {
        match self {
            Scenario::SingleAtomFiveLevel | Scenario::EffectiveThreeSingle(_) => LadderKind::SingleAtom,
            _ => LadderKind::Collective,
        }
    }

    pub fn roles(&self) -> RoleMap {
        match self {
            Scenario::SingleAtomFiveLevel => RoleMap::five_level(),
            Scenario::CollectiveSixLevel => RoleMap::collective_six(),
            Scenario::EffectiveThreeSingle(_) => RoleMap::effective_three_single(),
            Scenario::EffectiveThreeCollective(_) => RoleMap::effective_three_collective(),
            Scenario::FullEnsemble => RoleMap::projected(),
        }
    }

    /// Ω_R for the single atom, Ω_Ro for the ensemble.
    pub fn raman_frequency(&self, p: &DriveParams) -> Result<f64> {
        let ls = light_shifts_first_order(p)?;
        Ok(match self.ladder() {
            LadderKind::SingleAtom => ls.omega_r,
            LadderKind::Collective => ls.omega_ro,
        })
    }

    pub fn hamiltonian(&self, p: &DriveParams) -> Result<HamiltonianMatrix> {
        match self {
            Scenario::SingleAtomFiveLevel => Ok(build_five_level(p)),
            Scenario::CollectiveSixLevel => build_collective_six(p),
            Scenario::EffectiveThreeSingle(form) => effective_three_level_single(p, *form),
            Scenario::EffectiveThreeCollective(c) => effective_three_level_collective(p, *c),
            Scenario::FullEnsemble => Ok(FullEnsembleHamiltonian::new(p)?.to_matrix()),
        }
    }

    /// Propagates from the ground state over the configured number of
    /// Raman periods and reports blockade metrics.
    pub fn run(&self, p: &DriveParams, settings: &RunSettings) -> Result<ScenarioRun> {
        let raman = self.raman_frequency(p)?;
        let cfg = settings.propagation(raman)?;
        let h = self.hamiltonian(p)?;
        let psi0 = QuantumState::basis(h.labels().to_vec(), 0)?;

        let (trajectory, asymmetric_population) = if *self == Scenario::FullEnsemble {
            let full = propagate(&h, &psi0, &cfg.with_amplitudes(true))?;
            let n = p.n_atoms();
            let states = CollectiveSixBasis::ORDER
                .iter()
                .map(|&l| build_collective_state(l, n))
                .collect::<Result<Vec<_>>>()?;
            let basis = *states[0].basis();
            let mut outside: f64 = 0.0;
            for amps in full.amplitudes().unwrap_or_default() {
                outside = outside.max(amps.norm_squared() - symmetric_weight(&basis, amps)?);
            }
            (project_trajectory(&full, &states)?, Some(outside.max(0.0)))
        } else {
            (propagate(&h, &psi0, &cfg)?, None)
        };

        let report =
            blockade_report(&trajectory, &self.roles())?.with_regime_flags(RegimeFlags::evaluate(p, self.ladder()));
        Ok(ScenarioRun {
            trajectory,
            report,
            raman_frequency: raman,
            asymmetric_population,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub trajectory: Trajectory,
    pub report: BlockadeReport,
    pub raman_frequency: f64,
    /// Largest population outside the permutation-symmetric subspace, for
    /// full-ensemble runs.
    pub asymmetric_population: Option<f64>,
}

/// Time grid sized in Raman periods, unless `t_max` fixes it outright.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub periods: f64,
    pub t_max: Option<f64>,
    pub n_steps: usize,
    pub method: PropagationMethod,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            periods: DEFAULT_PERIODS,
            t_max: None,
            n_steps: DEFAULT_STEPS,
            method: PropagationMethod::default(),
        }
    }
}

impl RunSettings {
    pub fn propagation(&self, raman_frequency: f64) -> Result<PropagationConfig> {
        let cfg = match self.t_max {
            Some(t) => PropagationConfig::new(t, self.n_steps)?,
            None => PropagationConfig::over_periods(raman_frequency, self.periods, self.n_steps)?,
        };
        Ok(cfg.with_method(self.method))
    }
}
