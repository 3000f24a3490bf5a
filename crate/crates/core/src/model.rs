//! Shared domain types: drive parameters, Hamiltonians, states and
//! trajectories.
//!
//! All energies are angular frequencies with ħ = 1, expressed in whatever
//! reference unit the caller picks. Only ratios such as δ/Ω₁ carry physical
//! meaning, so nothing here assumes an absolute scale.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the Hermiticity check on [`HamiltonianMatrix`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on ‖ψ‖ = 1 for [`QuantumState`].
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance on Σ P = 1 for each row of a [`Trajectory`].
pub const POPULATION_SUM_TOL: f64 = 1e-8;

/// The physical knobs of a two-leg Raman drive.
///
/// The detunings are stored as the mean δ = (δ₁+δ₂)/2 and the two-photon
/// detuning Δ = δ₁−δ₂, which is the form every Hamiltonian builder consumes.
/// The per-leg detunings are derived on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    omega1: f64,
    omega2: f64,
    delta: f64,
    big_delta: f64,
    n_atoms: usize,
}

impl DriveParams {
    /// Builds parameters from Rabi frequencies, mean detuning δ and
    /// two-photon detuning Δ.
    pub fn new(omega1: f64, omega2: f64, delta: f64, big_delta: f64, n_atoms: usize) -> Result<Self> {
        let p = DriveParams {
            omega1,
            omega2,
            delta,
            big_delta,
            n_atoms,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from the one-photon detunings of each leg.
    pub fn from_leg_detunings(
        omega1: f64,
        omega2: f64,
        delta1: f64,
        delta2: f64,
        n_atoms: usize,
    ) -> Result<Self> {
        Self::new(omega1, omega2, 0.5 * (delta1 + delta2), delta1 - delta2, n_atoms)
    }

    /// Single-atom parameters (`n_atoms = 1`).
    pub fn single_atom(omega1: f64, omega2: f64, delta: f64, big_delta: f64) -> Result<Self> {
        Self::new(omega1, omega2, delta, big_delta, 1)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("delta", self.delta),
            ("big_delta", self.big_delta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if self.omega1 < 0.0 || self.omega2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "Rabi frequencies must be non-negative, got omega1={} omega2={}",
                self.omega1, self.omega2
            )));
        }
        if self.n_atoms == 0 {
            return Err(Error::InvalidParams("n_atoms must be positive".into()));
        }
        Ok(())
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    /// Mean one-photon detuning δ.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Two-photon detuning Δ.
    pub fn big_delta(&self) -> f64 {
        self.big_delta
    }

    pub fn delta1(&self) -> f64 {
        self.delta + 0.5 * self.big_delta
    }

    pub fn delta2(&self) -> f64 {
        self.delta - 0.5 * self.big_delta
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn with_omega1(self, omega1: f64) -> Result<Self> {
        Self::new(omega1, self.omega2, self.delta, self.big_delta, self.n_atoms)
    }

    pub fn with_omega2(self, omega2: f64) -> Result<Self> {
        Self::new(self.omega1, omega2, self.delta, self.big_delta, self.n_atoms)
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.omega1, self.omega2, delta, self.big_delta, self.n_atoms)
    }

    pub fn with_big_delta(self, big_delta: f64) -> Result<Self> {
        Self::new(self.omega1, self.omega2, self.delta, big_delta, self.n_atoms)
    }

    pub fn with_n_atoms(self, n_atoms: usize) -> Result<Self> {
        Self::new(self.omega1, self.omega2, self.delta, self.big_delta, n_atoms)
    }
}

/// Returns `(δ, Δ) = ((δ₁+δ₂)/2, δ₁−δ₂)`.
pub fn derived_detunings(p: &DriveParams) -> (f64, f64) {
    (p.delta(), p.big_delta())
}

/// First-order light shifts and Raman couplings of both the single-atom and
/// the collective ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightShiftSet {
    /// Ω₁²/4δ
    pub eps1: f64,
    /// Ω₂²/4δ
    pub eps2: f64,
    pub eps_a: f64,
    pub eps_c1: f64,
    pub eps_c2: f64,
    /// Ω₁Ω₂/2δ
    pub omega_r: f64,
    /// √N·Ω₁Ω₂/2δ
    pub omega_ro: f64,
    /// −(Ω₁⁴+Ω₂⁴)/8δ³
    pub delta_b: f64,
}

/// A dense Hermitian matrix over a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    labels: Vec<String>,
    entries: DMatrix<C64>,
}

impl HamiltonianMatrix {
    pub fn new(labels: Vec<String>, entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        if labels.len() != entries.nrows() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: labels.len(),
            });
        }
        let deviation = hermitian_deviation(&entries);
        let scale = entries.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HamiltonianMatrix { labels, entries })
    }

    pub fn from_real(labels: Vec<String>, entries: &DMatrix<f64>) -> Result<Self> {
        Self::new(labels, entries.map(|x| C64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// True when every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    /// Largest |H − H†| entry; zero for every builder in this crate.
    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.entries)
    }

    /// ⟨ψ|H|ψ⟩
    pub fn expectation(&self, psi: &QuantumState) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        let h_psi = &self.entries * psi.amplitudes();
        Ok(psi.amplitudes().dotc(&h_psi).re)
    }
}

fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// A normalized amplitude vector over a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    labels: Vec<String>,
    amplitudes: DVector<C64>,
}

impl QuantumState {
    pub fn new(labels: Vec<String>, amplitudes: DVector<C64>) -> Result<Self> {
        if labels.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(QuantumState { labels, amplitudes })
    }

    /// The basis vector `|labels[index]⟩`.
    pub fn basis(labels: Vec<String>, index: usize) -> Result<Self> {
        if index >= labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: index + 1,
            });
        }
        let mut amps = DVector::zeros(labels.len());
        amps[index] = C64::new(1.0, 0.0);
        Self::new(labels, amps)
    }

    /// The basis vector named `label` in the basis of `h`.
    pub fn basis_of(h: &HamiltonianMatrix, label: &str) -> Result<Self> {
        let idx = h.index_of(label).ok_or(Error::BasisMismatch)?;
        Self::basis(h.labels().to_vec(), idx)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Populations (and optionally amplitudes) sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    labels: Vec<String>,
    times: Vec<f64>,
    populations: Vec<Vec<f64>>,
    amplitudes: Option<Vec<DVector<C64>>>,
}

impl Trajectory {
    pub fn new(
        labels: Vec<String>,
        times: Vec<f64>,
        populations: Vec<Vec<f64>>,
        amplitudes: Option<Vec<DVector<C64>>>,
    ) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidTrajectory("empty time grid".into()));
        }
        if populations.len() != times.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} population rows for {} times",
                populations.len(),
                times.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTrajectory("times must be strictly increasing".into()));
        }
        for (k, row) in populations.iter().enumerate() {
            if row.len() != labels.len() {
                return Err(Error::InvalidTrajectory(format!(
                    "row {k} has {} entries for {} labels",
                    row.len(),
                    labels.len()
                )));
            }
            if row.iter().any(|&p| !(0.0..=1.0 + 1e-12).contains(&p)) {
                return Err(Error::InvalidTrajectory(format!("row {k} has a population outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > POPULATION_SUM_TOL {
                return Err(Error::InvalidTrajectory(format!("row {k} sums to {sum}")));
            }
        }
        if let Some(amps) = &amplitudes {
            if amps.len() != times.len() {
                return Err(Error::InvalidTrajectory("amplitude count does not match times".into()));
            }
        }
        Ok(Trajectory {
            labels,
            times,
            populations,
            amplitudes,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn populations(&self) -> &[Vec<f64>] {
        &self.populations
    }

    pub fn amplitudes(&self) -> Option<&[DVector<C64>]> {
        self.amplitudes.as_deref()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("non-empty by construction")
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Time series of one basis population.
    pub fn series(&self, index: usize) -> Vec<f64> {
        self.populations.iter().map(|row| row[index]).collect()
    }
}
