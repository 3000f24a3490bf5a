//! Schrödinger evolution under a time-independent Hamiltonian.
//!
//! The default method diagonalizes H once and applies `exp(−iHt)` exactly
//! at every output time. The alternative builds the one-step propagator
//! `exp(−iH·dt)` by scaling and squaring and applies it repeatedly; it
//! exists mainly as an independent check on the first.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{HamiltonianMatrix, QuantumState, Trajectory, NORM_TOL};

/// Output grid size used when the caller does not pick one.
pub const DEFAULT_STEPS: usize = 2000;
/// Default run length, in periods of the relevant Raman frequency.
pub const DEFAULT_PERIODS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropagationMethod {
    #[default]
    Eigendecomposition,
    ScaledExpm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    t_max: f64,
    n_steps: usize,
    method: PropagationMethod,
    record_amplitudes: bool,
}

impl PropagationConfig {
    /// Uniform grid of `n_steps + 1` points on `[0, t_max]`.
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidConfig(format!("t_max must be positive, got {t_max}")));
        }
        if n_steps < 2 {
            return Err(Error::InvalidConfig(format!("n_steps must be at least 2, got {n_steps}")));
        }
        Ok(PropagationConfig {
            t_max,
            n_steps,
            method: PropagationMethod::default(),
            record_amplitudes: false,
        })
    }

    /// `periods` full cycles at angular frequency `omega`.
    pub fn over_periods(omega: f64, periods: f64, n_steps: usize) -> Result<Self> {
        if !(omega.is_finite() && omega != 0.0) {
            return Err(Error::InvalidConfig(format!(
                "cannot size a run from oscillation frequency {omega}"
            )));
        }
        Self::new(periods * TAU / omega.abs(), n_steps)
    }

    pub fn with_method(mut self, method: PropagationMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_amplitudes(mut self, record: bool) -> Self {
        self.record_amplitudes = record;
        self
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn method(&self) -> PropagationMethod {
        self.method
    }

    pub fn record_amplitudes(&self) -> bool {
        self.record_amplitudes
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps)
            .map(|k| self.t_max * k as f64 / self.n_steps as f64)
            .collect()
    }
}

#[derive(Debug, Clone)]
enum Eigenvectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

/// Spectral decomposition of a Hamiltonian, ready to evolve states to any
/// time.
#[derive(Debug, Clone)]
pub struct Propagator {
    labels: Vec<String>,
    energies: DVector<f64>,
    vectors: Eigenvectors,
}

impl Propagator {
    pub fn new(h: &HamiltonianMatrix) -> Result<Self> {
        let (energies, vectors) = if h.is_real() {
            let eig = h.real_part().symmetric_eigen();
            (eig.eigenvalues, Eigenvectors::Real(eig.eigenvectors))
        } else {
            let eig = h.entries().clone().symmetric_eigen();
            (eig.eigenvalues, Eigenvectors::Complex(eig.eigenvectors))
        };
        Ok(Propagator {
            labels: h.labels().to_vec(),
            energies,
            vectors,
        })
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    fn check(&self, psi: &QuantumState) -> Result<()> {
        if psi.labels() != self.labels.as_slice() {
            return Err(Error::BasisMismatch);
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    /// V†ψ
    fn coefficients(&self, psi: &DVector<C64>) -> DVector<C64> {
        match &self.vectors {
            Eigenvectors::Real(v) => {
                let re = v.tr_mul(&psi.map(|z| z.re));
                let im = v.tr_mul(&psi.map(|z| z.im));
                re.zip_map(&im, C64::new)
            }
            Eigenvectors::Complex(v) => v.ad_mul(psi),
        }
    }

    /// V·diag(e^{−iEt})·c
    fn reconstruct(&self, coeffs: &DVector<C64>, t: f64) -> DVector<C64> {
        let rotated = DVector::from_fn(coeffs.len(), |k, _| coeffs[k] * C64::from_polar(1.0, -self.energies[k] * t));
        match &self.vectors {
            Eigenvectors::Real(v) => {
                let re = v * rotated.map(|z| z.re);
                let im = v * rotated.map(|z| z.im);
                re.zip_map(&im, C64::new)
            }
            Eigenvectors::Complex(v) => v * rotated,
        }
    }

    pub fn evolve(&self, psi: &QuantumState, t: f64) -> Result<QuantumState> {
        self.check(psi)?;
        let out = self.reconstruct(&self.coefficients(psi.amplitudes()), t);
        QuantumState::new(self.labels.clone(), out)
    }
}

/// `exp(A)` by scaling and squaring with a Taylor core.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let one_norm = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let squarings = if one_norm > 0.5 {
        (one_norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);

    let mut result = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
        if term.iter().map(|z| z.norm()).fold(0.0_f64, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn check_norm(amps: &DVector<C64>) -> Result<()> {
    let norm = amps.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NormDrift { norm });
    }
    Ok(())
}

/// Evolves `psi0` under `h` and samples populations on the config's grid.
pub fn propagate(h: &HamiltonianMatrix, psi0: &QuantumState, cfg: &PropagationConfig) -> Result<Trajectory> {
    if psi0.labels() != h.labels() {
        return Err(Error::BasisMismatch);
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let times = cfg.times();
    let mut populations = Vec::with_capacity(times.len());
    let mut amplitudes = cfg.record_amplitudes().then(|| Vec::with_capacity(times.len()));

    let mut push = |amps: DVector<C64>| -> Result<()> {
        check_norm(&amps)?;
        populations.push(amps.iter().map(|a| a.norm_sqr()).collect::<Vec<f64>>());
        if let Some(store) = amplitudes.as_mut() {
            store.push(amps);
        }
        Ok(())
    };

    match cfg.method() {
        PropagationMethod::Eigendecomposition => {
            let prop = Propagator::new(h)?;
            let coeffs = prop.coefficients(psi0.amplitudes());
            for &t in &times {
                // exp(0) = 1 exactly; skip the round trip through the eigenbasis
                if t == 0.0 {
                    push(psi0.amplitudes().clone())?;
                } else {
                    push(prop.reconstruct(&coeffs, t))?;
                }
            }
        }
        PropagationMethod::ScaledExpm => {
            let dt = cfg.t_max() / cfg.n_steps() as f64;
            let step = expm(&(h.entries() * C64::new(0.0, -dt)));
            let mut psi = psi0.amplitudes().clone();
            push(psi.clone())?;
            for _ in 0..cfg.n_steps() {
                psi = &step * psi;
                push(psi.clone())?;
            }
        }
    }

    Trajectory::new(h.labels().to_vec(), times, populations, amplitudes)
}

/// Populations at time `t`, linearly interpolated between grid points.
pub fn populations_at(traj: &Trajectory, t: f64) -> Result<Vec<f64>> {
    let times = traj.times();
    let (start, end) = (times[0], traj.t_max());
    if !(start..=end).contains(&t) {
        return Err(Error::TimeOutOfRange { t, start, end });
    }
    let upper = times.partition_point(|&x| x < t);
    if times[upper] == t {
        return Ok(traj.populations()[upper].clone());
    }
    let lower = upper - 1;
    let w = (t - times[lower]) / (times[upper] - times[lower]);
    let (a, b) = (&traj.populations()[lower], &traj.populations()[upper]);
    Ok(a.iter().zip(b).map(|(&x, &y)| x + w * (y - x)).collect())
}
