//! Adiabatic elimination and light-shift algebra.
//!
//! Far-detuned optically excited states are removed with the static
//! energy-denominator formula `H_eff = H_kk − H_ke·H_ee⁻¹·H_ek`, leaving an
//! effective Hamiltonian on the slow Raman-coupled states. The closed forms
//! for the single-atom and collective three-level models live here too, as
//! does the dressed-state computation of the blockade shift.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{DriveParams, HamiltonianMatrix, LightShiftSet};

/// Default ratio between the energy gap of an eliminated state and the
/// largest coupling to it below which elimination is flagged.
pub const DEFAULT_REGIME_RATIO: f64 = 5.0;

fn require_detuned(p: &DriveParams) -> Result<f64> {
    let d = p.delta();
    if d == 0.0 {
        return Err(Error::NotAdiabatic(
            "mean detuning is zero; the excited states cannot be eliminated".into(),
        ));
    }
    Ok(d)
}

/// First-order light shifts, Raman couplings, and the analytic blockade
/// shift.
///
/// The collective shifts are the elimination results for the ladder
/// `|A⟩ → |C₁⟩ → |C₂⟩`: `ε_A = N·ε₁`, `ε_C1 = ε₂ + (N−1)·ε₁`,
/// `ε_C2 = 2ε₂ + (N−2)·ε₁`, so consecutive differences are equal.
pub fn light_shifts_first_order(p: &DriveParams) -> Result<LightShiftSet> {
    let d = require_detuned(p)?;
    let (o1, o2) = (p.omega1(), p.omega2());
    let n = p.n_atoms() as f64;
    let eps1 = o1 * o1 / (4.0 * d);
    let eps2 = o2 * o2 / (4.0 * d);
    let omega_r = o1 * o2 / (2.0 * d);
    Ok(LightShiftSet {
        eps1,
        eps2,
        eps_a: n * eps1,
        eps_c1: eps2 + (n - 1.0) * eps1,
        eps_c2: 2.0 * eps2 + p.n_atoms().saturating_sub(2) as f64 * eps1,
        omega_r,
        omega_ro: n.sqrt() * omega_r,
        delta_b: analytic_blockade_shift(p)?,
    })
}

/// `−(Ω₁⁴ + Ω₂⁴) / 8δ³`
pub fn analytic_blockade_shift(p: &DriveParams) -> Result<f64> {
    let d = require_detuned(p)?;
    Ok(-(p.omega1().powi(4) + p.omega2().powi(4)) / (8.0 * d.powi(3)))
}

/// How the energy denominators of the elimination are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EliminationOrder {
    /// `H_kk − H_ke·H_ee⁻¹·H_ek`: denominators measured from zero energy.
    #[default]
    First,
    /// Symmetrized Schrieffer–Wolff form with denominators measured from
    /// each kept state's own diagonal energy:
    /// `H_ij + ½[H_ke (E_i − H_ee)⁻¹ H_ek]_ij + ½[H_ke (E_j − H_ee)⁻¹ H_ek]_ij`.
    Second,
}

/// Which basis states survive an elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationSpec {
    kept: Vec<usize>,
    eliminated: Vec<usize>,
    order: EliminationOrder,
    regime_ratio: f64,
}

impl EliminationSpec {
    /// Eliminates `eliminated` from a `dim`-state basis; every other index is
    /// kept, in ascending order.
    pub fn new(dim: usize, eliminated: &[usize], order: EliminationOrder) -> Result<Self> {
        let mut elim = eliminated.to_vec();
        elim.sort_unstable();
        elim.dedup();
        if elim.len() != eliminated.len() {
            return Err(Error::InvalidParams("eliminated indices must be distinct".into()));
        }
        if let Some(&bad) = elim.iter().find(|&&i| i >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad + 1,
            });
        }
        let kept: Vec<usize> = (0..dim).filter(|i| !elim.contains(i)).collect();
        if kept.is_empty() {
            return Err(Error::InvalidParams("elimination must keep at least one state".into()));
        }
        Ok(EliminationSpec {
            kept,
            eliminated: elim,
            order,
            regime_ratio: DEFAULT_REGIME_RATIO,
        })
    }

    /// Eliminates the states named in `labels`.
    pub fn by_labels(h: &HamiltonianMatrix, labels: &[&str], order: EliminationOrder) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| h.index_of(l).ok_or(Error::BasisMismatch))
            .collect::<Result<Vec<_>>>()?;
        Self::new(h.dim(), &idx, order)
    }

    pub fn with_regime_ratio(mut self, ratio: f64) -> Self {
        self.regime_ratio = ratio;
        self
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn eliminated(&self) -> &[usize] {
        &self.eliminated
    }

    pub fn order(&self) -> EliminationOrder {
        self.order
    }
}

/// A precondition of the reduction that does not hold for the given input.
/// Reported, never fatal.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeWarning {
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub hamiltonian: HamiltonianMatrix,
    pub warnings: Vec<RegimeWarning>,
}

fn block(m: &DMatrix<C64>, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

fn invert(m: DMatrix<C64>) -> Result<DMatrix<C64>> {
    let inv = m.try_inverse().ok_or(Error::SingularBlock)?;
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularBlock);
    }
    Ok(inv)
}

/// Adiabatically eliminates `spec.eliminated()` from `h`.
pub fn eliminate(h: &HamiltonianMatrix, spec: &EliminationSpec) -> Result<Reduction> {
    let dim = h.dim();
    if spec.kept.len() + spec.eliminated.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: spec.kept.len() + spec.eliminated.len(),
        });
    }
    let m = h.entries();
    let h_kk = block(m, &spec.kept, &spec.kept);
    let h_ke = block(m, &spec.kept, &spec.eliminated);
    let h_ee = block(m, &spec.eliminated, &spec.eliminated);
    let h_ek = h_ke.adjoint();

    let warnings = regime_warnings(&h_kk, &h_ke, &h_ee, spec.regime_ratio);
    for w in &warnings {
        log::warn!("{}", w.detail);
    }

    let raw = match spec.order {
        EliminationOrder::First => &h_kk - &h_ke * invert(h_ee.clone())? * &h_ek,
        EliminationOrder::Second => {
            let n_kept = spec.kept.len();
            let n_elim = spec.eliminated.len();
            let identity = DMatrix::<C64>::identity(n_elim, n_elim);
            let mut corr = Vec::with_capacity(n_kept);
            for k in 0..n_kept {
                let e_k = h_kk[(k, k)].re;
                let resolvent = invert(&identity * C64::new(e_k, 0.0) - &h_ee)?;
                corr.push(&h_ke * resolvent * &h_ek);
            }
            DMatrix::from_fn(n_kept, n_kept, |i, j| h_kk[(i, j)] + 0.5 * (corr[i][(i, j)] + corr[j][(i, j)]))
        }
    };
    let hermitian = DMatrix::from_fn(raw.nrows(), raw.ncols(), |i, j| 0.5 * (raw[(i, j)] + raw[(j, i)].conj()));
    let labels = spec.kept.iter().map(|&i| h.labels()[i].clone()).collect();
    Ok(Reduction {
        hamiltonian: HamiltonianMatrix::new(labels, hermitian)?,
        warnings,
    })
}

fn regime_warnings(h_kk: &DMatrix<C64>, h_ke: &DMatrix<C64>, h_ee: &DMatrix<C64>, ratio: f64) -> Vec<RegimeWarning> {
    let coupling = h_ke.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if coupling == 0.0 {
        return Vec::new();
    }
    let mut gap = f64::INFINITY;
    for e in 0..h_ee.nrows() {
        for k in 0..h_kk.nrows() {
            gap = gap.min((h_ee[(e, e)].re - h_kk[(k, k)].re).abs());
        }
    }
    if gap < ratio * coupling {
        vec![RegimeWarning {
            detail: format!(
                "eliminated-state gap {gap:e} is less than {ratio} x the largest coupling {coupling:e}"
            ),
        }]
    } else {
        Vec::new()
    }
}

/// Form of the single-atom effective three-level Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThreeLevelForm {
    /// Energy zero moved by `ε₁ + Δ/2` at the resonance `Δ = ε₂`, leaving
    /// `−(ε₁+ε₂)` as the only diagonal entry.
    #[default]
    Shifted,
    /// Light-shifted diagonal `(Δ/2 + ε₁, −Δ/2 + ε₁ + ε₂, −3Δ/2 + ε₂)` at the
    /// parameters' own Δ.
    Unshifted,
}

/// Off-diagonal used on the `|C₁⟩ ↔ |C₂⟩` leg of the collective model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CollectiveCoupling {
    /// `Ω_Ro/√2`, the N ≫ 1 limit.
    #[default]
    LargeN,
    /// `√(2(N−1)/N)·Ω_Ro/2`.
    FiniteN,
}

fn three_by_three(labels: [&str; 3], diagonal: [f64; 3], c01: f64, c12: f64) -> HamiltonianMatrix {
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[diagonal[0], c01, 0.0, c01, diagonal[1], c12, 0.0, c12, diagonal[2]],
    );
    HamiltonianMatrix::from_real(labels.iter().map(|s| s.to_string()).collect(), &m)
        .expect("real-symmetric by construction")
}

/// Closed-form effective Hamiltonian on `|1⟩, |3⟩, |5⟩`.
pub fn effective_three_level_single(p: &DriveParams, form: ThreeLevelForm) -> Result<HamiltonianMatrix> {
    let ls = light_shifts_first_order(p)?;
    let half = 0.5 * ls.omega_r;
    let diagonal = match form {
        ThreeLevelForm::Shifted => [0.0, 0.0, -(ls.eps1 + ls.eps2)],
        ThreeLevelForm::Unshifted => {
            let bd = p.big_delta();
            [0.5 * bd + ls.eps1, -0.5 * bd + ls.eps1 + ls.eps2, -1.5 * bd + ls.eps2]
        }
    };
    Ok(three_by_three(["1", "3", "5"], diagonal, half, half))
}

/// Closed-form collective model on `|A⟩, |C₁⟩, |C₂⟩` at the A↔C₁ resonance,
/// with the blockade shift as the only diagonal entry.
pub fn effective_three_level_collective(p: &DriveParams, coupling: CollectiveCoupling) -> Result<HamiltonianMatrix> {
    require_collective(p)?;
    let ls = light_shifts_first_order(p)?;
    let c12 = match coupling {
        CollectiveCoupling::LargeN => ls.omega_ro / std::f64::consts::SQRT_2,
        CollectiveCoupling::FiniteN => collective_c1_c2_coupling(p.n_atoms(), ls.omega_ro),
    };
    Ok(three_by_three(["A", "C1", "C2"], [0.0, 0.0, ls.delta_b], 0.5 * ls.omega_ro, c12))
}

/// Collective model before the energy shift: diagonal
/// `(ε_A + Δ/2, ε_C1 − Δ/2, ε_C2 − 3Δ/2)` with first-order shifts and the
/// finite-N `|C₁⟩ ↔ |C₂⟩` coupling.
pub fn effective_three_level_collective_unshifted(p: &DriveParams) -> Result<HamiltonianMatrix> {
    require_collective(p)?;
    let ls = light_shifts_first_order(p)?;
    let bd = p.big_delta();
    Ok(three_by_three(
        ["A", "C1", "C2"],
        [ls.eps_a + 0.5 * bd, ls.eps_c1 - 0.5 * bd, ls.eps_c2 - 1.5 * bd],
        0.5 * ls.omega_ro,
        collective_c1_c2_coupling(p.n_atoms(), ls.omega_ro),
    ))
}

fn collective_c1_c2_coupling(n_atoms: usize, omega_ro: f64) -> f64 {
    let n = n_atoms as f64;
    (2.0 * (n - 1.0) / n).sqrt() * 0.5 * omega_ro
}

fn require_collective(p: &DriveParams) -> Result<()> {
    if p.n_atoms() < 3 {
        return Err(Error::InvalidParams(format!(
            "collective ladder needs n_atoms >= 3, got {}",
            p.n_atoms()
        )));
    }
    Ok(())
}

/// Which Raman ladder a resonance condition refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    SingleAtom,
    Collective,
}

/// Two-photon detuning Δ that makes the first Raman step resonant at first
/// order: `Δ = ε₂` for the single atom, `Δ = ε_C1 − ε_A` for the ensemble.
pub fn resonance_detuning(p: &DriveParams, ladder: LadderKind) -> Result<f64> {
    let ls = light_shifts_first_order(p)?;
    Ok(match ladder {
        LadderKind::SingleAtom => ls.eps2,
        LadderKind::Collective => ls.eps_c1 - ls.eps_a,
    })
}

/// Light shifts of `|A⟩, |C₁⟩, |C₂⟩` to all orders, each obtained from the
/// exact eigenvalues of the 2×2 dressed blocks formed with the neighbouring
/// excited states.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedShifts {
    pub eps_a: f64,
    pub eps_c1: f64,
    pub eps_c2: f64,
    pub delta_b: f64,
    pub warnings: Vec<RegimeWarning>,
}

/// Shift of the level adiabatically connected to the kept state of
/// `[[0, c], [c, −δ]]`, written to avoid cancellation.
fn dressed_shift(coupling: f64, delta: f64) -> f64 {
    let half = 0.5 * delta.abs();
    let root = (half * half + coupling * coupling).sqrt();
    delta.signum() * coupling * coupling / (root + half)
}

pub fn dressed_light_shifts(p: &DriveParams) -> Result<DressedShifts> {
    require_collective(p)?;
    let d = p.delta();
    if d == 0.0 || !d.is_finite() {
        return Err(Error::CannotTrack(
            "kept and excited levels are degenerate at zero detuning".into(),
        ));
    }
    let n = p.n_atoms() as f64;
    let (h1, h2) = (0.5 * p.omega1(), 0.5 * p.omega2());
    let sqrt2 = std::f64::consts::SQRT_2;

    let eps_a = dressed_shift(n.sqrt() * h1, d);
    let eps_c1 = dressed_shift(h2, d) + dressed_shift((n - 1.0).sqrt() * h1, d);
    let eps_c2 = dressed_shift(sqrt2 * h2, d) + dressed_shift((n - 2.0).sqrt() * h1, d);

    let largest_rabi = (n.sqrt() * p.omega1()).max(sqrt2 * p.omega2());
    let mut warnings = Vec::new();
    if d.abs() < DEFAULT_REGIME_RATIO * largest_rabi {
        let w = RegimeWarning {
            detail: format!(
                "|delta| = {} is less than {DEFAULT_REGIME_RATIO} x the largest collective Rabi frequency {largest_rabi}",
                d.abs()
            ),
        };
        log::warn!("{}", w.detail);
        warnings.push(w);
    }
    Ok(DressedShifts {
        eps_a,
        eps_c1,
        eps_c2,
        delta_b: (eps_c2 - eps_c1) - (eps_c1 - eps_a),
        warnings,
    })
}

/// Numeric blockade shift `(ε_C2 − ε_C1) − (ε_C1 − ε_A)` from dressed-state
/// eigenvalues.
pub fn blockade_shift_numeric(p: &DriveParams) -> Result<f64> {
    Ok(dressed_light_shifts(p)?.delta_b)
}
