//! Hamiltonian builders: the single-atom five-level ladder, the truncated
//! six-level collective ladder, and the brute-force N-atom product-space
//! Hamiltonian that serves as the oracle for the collective model.
//!
//! All builders work in the rotating frame and return exactly
//! real-symmetric matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{DriveParams, HamiltonianMatrix};

/// Largest ensemble the brute-force builders accept by default
/// (3⁸ = 6561 product states).
pub const DEFAULT_MAX_ATOMS: usize = 8;

/// The five single-atom levels, in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiveLevelBasis {
    L1,
    L2,
    L3,
    L4,
    L5,
}

impl FiveLevelBasis {
    pub const ALL: [FiveLevelBasis; 5] = [Self::L1, Self::L2, Self::L3, Self::L4, Self::L5];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::L1 => "1",
            Self::L2 => "2",
            Self::L3 => "3",
            Self::L4 => "4",
            Self::L5 => "5",
        }
    }

    pub fn labels() -> Vec<String> {
        Self::ALL.iter().map(|s| s.label().to_string()).collect()
    }
}

/// Symmetric collective states of N three-level atoms, named by how many
/// atoms sit in `g` and in `c` (the rest are in `a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollectiveLabel {
    A,
    G1,
    C1,
    G2,
    C2,
    G11,
    G21,
    G12,
}

impl CollectiveLabel {
    pub const ALL: [CollectiveLabel; 8] = [
        Self::A,
        Self::G1,
        Self::C1,
        Self::G2,
        Self::C2,
        Self::G11,
        Self::G21,
        Self::G12,
    ];

    /// `(n_g, n_c)` occupation of the label.
    pub fn occupation(self) -> (usize, usize) {
        match self {
            Self::A => (0, 0),
            Self::G1 => (1, 0),
            Self::C1 => (0, 1),
            Self::G2 => (2, 0),
            Self::C2 => (0, 2),
            Self::G11 => (1, 1),
            Self::G21 => (2, 1),
            Self::G12 => (1, 2),
        }
    }

    pub fn min_atoms(self) -> usize {
        let (g, c) = self.occupation();
        (g + c).max(1)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::G1 => "G1",
            Self::C1 => "C1",
            Self::G2 => "G2",
            Self::C2 => "C2",
            Self::G11 => "G11",
            Self::G21 => "G21",
            Self::G12 => "G12",
        }
    }
}

impl std::fmt::Display for CollectiveLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Row order of the truncated six-level collective Hamiltonian.
pub struct CollectiveSixBasis;

impl CollectiveSixBasis {
    pub const ORDER: [CollectiveLabel; 6] = [
        CollectiveLabel::A,
        CollectiveLabel::G1,
        CollectiveLabel::C1,
        CollectiveLabel::G11,
        CollectiveLabel::C2,
        CollectiveLabel::G12,
    ];

    pub fn labels() -> Vec<String> {
        Self::ORDER.iter().map(|l| l.as_str().to_string()).collect()
    }
}

/// Internal level of one atom in the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomLevel {
    A = 0,
    G = 1,
    C = 2,
}

impl AtomLevel {
    fn from_digit(d: usize) -> Self {
        match d {
            0 => AtomLevel::A,
            1 => AtomLevel::G,
            _ => AtomLevel::C,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            AtomLevel::A => 'a',
            AtomLevel::G => 'g',
            AtomLevel::C => 'c',
        }
    }
}

/// All 3^N product states, ordered lexicographically with atom 0 as the
/// most significant digit and `a < g < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullEnsembleBasis {
    n_atoms: usize,
}

impl FullEnsembleBasis {
    pub fn new(n_atoms: usize, cap: usize) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::InvalidParams("n_atoms must be positive".into()));
        }
        if n_atoms > cap {
            return Err(Error::TooManyAtoms { n_atoms, cap });
        }
        Ok(FullEnsembleBasis { n_atoms })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        3usize.pow(self.n_atoms as u32)
    }

    /// Index stride of atom `atom`.
    fn stride(&self, atom: usize) -> usize {
        3usize.pow((self.n_atoms - 1 - atom) as u32)
    }

    pub fn levels(&self, index: usize) -> Vec<AtomLevel> {
        (0..self.n_atoms)
            .map(|j| AtomLevel::from_digit((index / self.stride(j)) % 3))
            .collect()
    }

    pub fn index_of(&self, levels: &[AtomLevel]) -> Result<usize> {
        if levels.len() != self.n_atoms {
            return Err(Error::DimensionMismatch {
                expected: self.n_atoms,
                got: levels.len(),
            });
        }
        Ok(levels.iter().fold(0, |acc, &l| acc * 3 + l as usize))
    }

    /// `(n_g, n_c)` of a product state.
    pub fn occupation(&self, index: usize) -> (usize, usize) {
        let mut rest = index;
        let (mut n_g, mut n_c) = (0, 0);
        for _ in 0..self.n_atoms {
            match rest % 3 {
                1 => n_g += 1,
                2 => n_c += 1,
                _ => {}
            }
            rest /= 3;
        }
        (n_g, n_c)
    }

    pub fn label(&self, index: usize) -> String {
        self.levels(index).into_iter().map(AtomLevel::as_char).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }
}

/// The N-atom Hamiltonian as a sum of identical single-atom lambda
/// Hamiltonians, each embedded by identity on the other atoms.
///
/// Per-atom energies are chosen so the collective ladder reproduces the
/// truncated six-level diagonal: `E_a = Δ/2N`, `E_g = E_a − δ − Δ/2`,
/// `E_c = E_a − Δ`. With N = 1 this is the lambda system with diagonal
/// `(Δ/2, −δ, −Δ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullEnsembleHamiltonian {
    basis: FullEnsembleBasis,
    level_energy: [f64; 3],
    coupling_ag: f64,
    coupling_gc: f64,
}

impl FullEnsembleHamiltonian {
    pub fn new(p: &DriveParams) -> Result<Self> {
        Self::with_cap(p, DEFAULT_MAX_ATOMS)
    }

    pub fn with_cap(p: &DriveParams, cap: usize) -> Result<Self> {
        let basis = FullEnsembleBasis::new(p.n_atoms(), cap)?;
        let e_a = p.big_delta() / (2.0 * p.n_atoms() as f64);
        Ok(FullEnsembleHamiltonian {
            basis,
            level_energy: [e_a, e_a - p.delta() - 0.5 * p.big_delta(), e_a - p.big_delta()],
            coupling_ag: 0.5 * p.omega1(),
            coupling_gc: 0.5 * p.omega2(),
        })
    }

    pub fn basis(&self) -> &FullEnsembleBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn diagonal(&self, index: usize) -> f64 {
        let (n_g, n_c) = self.basis.occupation(index);
        let n_a = self.basis.n_atoms() - n_g - n_c;
        n_a as f64 * self.level_energy[0]
            + n_g as f64 * self.level_energy[1]
            + n_c as f64 * self.level_energy[2]
    }

    /// Calls `f(neighbor, coupling)` for every single-atom transition out of
    /// product state `index`.
    fn for_each_transition(&self, index: usize, mut f: impl FnMut(usize, f64)) {
        for atom in 0..self.basis.n_atoms() {
            let stride = self.basis.stride(atom);
            match (index / stride) % 3 {
                0 => f(index + stride, self.coupling_ag),
                1 => {
                    f(index - stride, self.coupling_ag);
                    f(index + stride, self.coupling_gc);
                }
                _ => f(index - stride, self.coupling_gc),
            }
        }
    }

    /// H·v without materializing the matrix.
    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        let mut out = DVector::zeros(dim);
        for i in 0..dim {
            let mut acc = v[i] * self.diagonal(i);
            self.for_each_transition(i, |j, c| {
                if c != 0.0 {
                    acc += v[j] * c;
                }
            });
            out[i] = acc;
        }
        Ok(out)
    }

    /// ⟨bra|H|ket⟩
    pub fn matrix_element(&self, bra: &DVector<C64>, ket: &DVector<C64>) -> Result<C64> {
        if bra.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: bra.len(),
            });
        }
        Ok(bra.dotc(&self.apply(ket)?))
    }

    pub fn to_matrix(&self) -> HamiltonianMatrix {
        let dim = self.dim();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(self.diagonal(i), 0.0);
            self.for_each_transition(i, |j, c| m[(i, j)] = C64::new(c, 0.0));
        }
        HamiltonianMatrix::new(self.basis.labels(), m).expect("real-symmetric by construction")
    }
}

fn tridiagonal(labels: Vec<String>, diagonal: &[f64], off_diagonal: &[f64]) -> HamiltonianMatrix {
    let n = diagonal.len();
    debug_assert_eq!(off_diagonal.len() + 1, n);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (i, &d) in diagonal.iter().enumerate() {
        m[(i, i)] = d;
    }
    for (i, &c) in off_diagonal.iter().enumerate() {
        m[(i, i + 1)] = c;
        m[(i + 1, i)] = c;
    }
    HamiltonianMatrix::from_real(labels, &m).expect("real-symmetric by construction")
}

/// Single-atom five-level ladder |1⟩…|5⟩ driven alternately by Ω₁ and Ω₂.
pub fn build_five_level(p: &DriveParams) -> HamiltonianMatrix {
    let (d, bd) = (p.delta(), p.big_delta());
    let (h1, h2) = (0.5 * p.omega1(), 0.5 * p.omega2());
    tridiagonal(
        FiveLevelBasis::labels(),
        &[0.5 * bd, -d, -0.5 * bd, -(d + bd), -1.5 * bd],
        &[h1, h2, h1, h2],
    )
}

/// Truncated collective ladder |A⟩, |G₁⟩, |C₁⟩, |G₁,₁⟩, |C₂⟩, |G₁,₂⟩.
///
/// The Ω₁ legs carry the bosonic enhancement √N, √(N−1), √(N−2); the Ω₂
/// legs carry 1 and √2. Requires `n_atoms ≥ 3`.
pub fn build_collective_six(p: &DriveParams) -> Result<HamiltonianMatrix> {
    let n = p.n_atoms();
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "the six-level collective Hamiltonian needs n_atoms >= 3, got {n}"
        )));
    }
    let n = n as f64;
    let (d, bd) = (p.delta(), p.big_delta());
    let (h1, h2) = (0.5 * p.omega1(), 0.5 * p.omega2());
    Ok(tridiagonal(
        CollectiveSixBasis::labels(),
        &[0.5 * bd, -d, -0.5 * bd, -(d + bd), -1.5 * bd, -(d + 2.0 * bd)],
        &[
            n.sqrt() * h1,
            h2,
            (n - 1.0).sqrt() * h1,
            std::f64::consts::SQRT_2 * h2,
            (n - 2.0).sqrt() * h1,
        ],
    ))
}

/// Dense 3^N × 3^N ensemble Hamiltonian (see [`FullEnsembleHamiltonian`]).
pub fn build_full_ensemble(p: &DriveParams) -> Result<HamiltonianMatrix> {
    Ok(FullEnsembleHamiltonian::new(p)?.to_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(h: &HamiltonianMatrix, i: usize, j: usize) -> f64 {
        h.get(i, j).re
    }

    #[test]
    fn five_level_reference_entries() {
        let p = DriveParams::single_atom(1.0, 0.1, 10.0, 0.0).unwrap();
        let h = build_five_level(&p);
        let diag: Vec<f64> = (0..5).map(|i| real(&h, i, i)).collect();
        assert_eq!(diag, vec![0.0, -10.0, 0.0, -10.0, 0.0]);
        assert_eq!(real(&h, 0, 1), 0.5);
        assert_eq!(real(&h, 2, 3), 0.5);
        assert_eq!(real(&h, 1, 2), 0.05);
        assert_eq!(real(&h, 3, 4), 0.05);
        assert_eq!(real(&h, 0, 2), 0.0);
        assert!(h.is_real());
    }

    #[test]
    fn five_level_zero_drive_is_zero() {
        let p = DriveParams::single_atom(0.0, 0.0, 0.0, 0.0).unwrap();
        let h = build_five_level(&p);
        assert!(h.entries().iter().all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn five_level_diagonal_with_two_photon_detuning() {
        let p = DriveParams::single_atom(1.0, 0.1, 10.0, 0.4).unwrap();
        let h = build_five_level(&p);
        let expected = [0.2, -10.0, -0.2, -10.4, -0.6];
        for (i, e) in expected.iter().enumerate() {
            assert!((real(&h, i, i) - e).abs() < 1e-15);
        }
    }

    #[test]
    fn collective_six_reference_entries() {
        let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, 100).unwrap();
        let h = build_collective_six(&p).unwrap();
        assert_eq!(real(&h, 0, 1), 5.0);
        assert_eq!(real(&h, 1, 2), 0.05);
        assert!((real(&h, 2, 3) - 99f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((real(&h, 2, 3) - 4.9749).abs() < 1e-4);
        assert!((real(&h, 3, 4) - 0.070711).abs() < 1e-6);
        assert!((real(&h, 4, 5) - 4.9497).abs() < 1e-4);
        let diag: Vec<f64> = (0..6).map(|i| real(&h, i, i)).collect();
        assert_eq!(diag, vec![0.0, -10.0, 0.0, -10.0, 0.0, -10.0]);
    }

    #[test]
    fn collective_six_zero_drive_is_diagonal() {
        let p = DriveParams::new(0.0, 0.0, 10.0, 0.3, 3).unwrap();
        let h = build_collective_six(&p).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert_eq!(h.get(i, j), C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn collective_six_g1_c1_independent_of_n() {
        let entries: Vec<f64> = (3..50)
            .map(|n| {
                let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, n).unwrap();
                real(&build_collective_six(&p).unwrap(), 1, 2)
            })
            .collect();
        assert!(entries.iter().all(|&x| x == 0.05));
    }

    #[test]
    fn collective_six_rejects_small_ensembles() {
        let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, 2).unwrap();
        assert!(build_collective_six(&p).is_err());
    }

    #[test]
    fn full_ensemble_single_atom_is_lambda_system() {
        let p = DriveParams::new(1.0, 0.1, 10.0, 0.4, 1).unwrap();
        let h = build_full_ensemble(&p).unwrap();
        assert_eq!(h.labels(), &["a", "g", "c"]);
        assert!((real(&h, 0, 0) - 0.2).abs() < 1e-15);
        assert!((real(&h, 1, 1) + 10.0).abs() < 1e-15);
        assert!((real(&h, 2, 2) + 0.2).abs() < 1e-15);
        assert_eq!(real(&h, 0, 1), 0.5);
        assert_eq!(real(&h, 1, 2), 0.05);
        assert_eq!(real(&h, 0, 2), 0.0);
    }

    #[test]
    fn full_ensemble_undriven_spectrum_is_sum_of_atom_energies() {
        let p = DriveParams::new(0.0, 0.0, 10.0, 0.3, 3).unwrap();
        let op = FullEnsembleHamiltonian::new(&p).unwrap();
        let h = op.to_matrix();
        for i in 0..h.dim() {
            let expected: f64 = op.basis().levels(i).iter().map(|&l| op.level_energy[l as usize]).sum();
            assert!((real(&h, i, i) - expected).abs() < 1e-13);
            for j in 0..h.dim() {
                if i != j {
                    assert_eq!(real(&h, i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn full_ensemble_respects_cap() {
        let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, 9).unwrap();
        assert!(matches!(build_full_ensemble(&p), Err(Error::TooManyAtoms { .. })));
    }

    #[test]
    fn apply_matches_dense_matrix() {
        let p = DriveParams::new(0.7, 0.3, 4.0, 0.25, 4).unwrap();
        let op = FullEnsembleHamiltonian::new(&p).unwrap();
        let h = op.to_matrix();
        let v = DVector::from_fn(op.dim(), |i, _| C64::new((i as f64).sin(), (i as f64 * 0.3).cos()));
        let dense = h.entries() * &v;
        let sparse = op.apply(&v).unwrap();
        assert!((dense - sparse).norm() < 1e-12);
    }

    #[test]
    fn basis_index_round_trip() {
        let b = FullEnsembleBasis::new(4, DEFAULT_MAX_ATOMS).unwrap();
        for i in 0..b.dim() {
            assert_eq!(b.index_of(&b.levels(i)).unwrap(), i);
        }
        assert_eq!(b.label(0), "aaaa");
        assert_eq!(b.label(b.dim() - 1), "cccc");
        assert_eq!(b.label(1), "aaag");
    }
}
