//! Symmetric collective states of N three-level atoms built explicitly in
//! the 3^N product space, and the brute-force checks that go with them:
//! coupling matrix elements, projection of full-ensemble dynamics, and a
//! report of what the six-level truncation drops.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonians::{CollectiveLabel, FullEnsembleBasis, FullEnsembleHamiltonian, DEFAULT_MAX_ATOMS};
use crate::model::{DriveParams, HamiltonianMatrix, Trajectory};

/// Label of the residual column added by [`project_trajectory`].
pub const OUTSIDE_LABEL: &str = "outside";

/// Number of product states with `n_g` atoms in g and `n_c` in c.
pub fn class_size(n_atoms: usize, n_g: usize, n_c: usize) -> usize {
    // N! / (n_a! n_g! n_c!) as a product of two binomials
    binomial(n_atoms, n_g) * binomial(n_atoms - n_g, n_c)
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Equal-weight superposition of every product state in occupation class
/// `(n_g, n_c)`.
fn class_vector(basis: &FullEnsembleBasis, n_g: usize, n_c: usize) -> DVector<C64> {
    let amp = C64::new(1.0 / (class_size(basis.n_atoms(), n_g, n_c) as f64).sqrt(), 0.0);
    DVector::from_fn(basis.dim(), |i, _| {
        if basis.occupation(i) == (n_g, n_c) {
            amp
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveState {
    label: CollectiveLabel,
    basis: FullEnsembleBasis,
    amplitudes: DVector<C64>,
}

impl CollectiveState {
    pub fn label(&self) -> CollectiveLabel {
        self.label
    }

    pub fn n_atoms(&self) -> usize {
        self.basis.n_atoms()
    }

    pub fn basis(&self) -> &FullEnsembleBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// ⟨self|other⟩
    pub fn overlap(&self, other: &CollectiveState) -> Result<C64> {
        if self.n_atoms() != other.n_atoms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_atoms(),
                got: other.n_atoms(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }
}

pub fn build_collective_state(label: CollectiveLabel, n_atoms: usize) -> Result<CollectiveState> {
    build_collective_state_capped(label, n_atoms, DEFAULT_MAX_ATOMS)
}

pub fn build_collective_state_capped(label: CollectiveLabel, n_atoms: usize, cap: usize) -> Result<CollectiveState> {
    if n_atoms < label.min_atoms() {
        return Err(Error::IncompatibleLabel {
            label: label.as_str(),
            needed: label.min_atoms(),
            n_atoms,
        });
    }
    let basis = FullEnsembleBasis::new(n_atoms, cap)?;
    let (n_g, n_c) = label.occupation();
    Ok(CollectiveState {
        label,
        basis,
        amplitudes: class_vector(&basis, n_g, n_c),
    })
}

/// ⟨bra|H_full|ket⟩ for the ensemble described by `p`.
pub fn coupling_matrix_element(bra: &CollectiveState, ket: &CollectiveState, p: &DriveParams) -> Result<C64> {
    if bra.n_atoms() != ket.n_atoms() {
        return Err(Error::DimensionMismatch {
            expected: bra.n_atoms(),
            got: ket.n_atoms(),
        });
    }
    if p.n_atoms() != ket.n_atoms() {
        return Err(Error::DimensionMismatch {
            expected: ket.n_atoms(),
            got: p.n_atoms(),
        });
    }
    let h = FullEnsembleHamiltonian::with_cap(p, ket.n_atoms())?;
    h.matrix_element(&bra.amplitudes, &ket.amplitudes)
}

/// Populations of `states` along a full-ensemble trajectory, plus the
/// population left outside their span.
pub fn project_trajectory(traj: &Trajectory, states: &[CollectiveState]) -> Result<Trajectory> {
    let amplitudes = traj.amplitudes().ok_or(Error::MissingAmplitudes)?;
    let dim = traj.labels().len();
    for s in states {
        if s.amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.amplitudes.len(),
            });
        }
    }
    for (i, s) in states.iter().enumerate() {
        if states[..i].iter().any(|o| o.label == s.label) {
            return Err(Error::InvalidParams(format!("collective state {} listed twice", s.label)));
        }
    }

    let mut labels: Vec<String> = states.iter().map(|s| s.label.as_str().to_string()).collect();
    labels.push(OUTSIDE_LABEL.to_string());

    let populations = amplitudes
        .iter()
        .map(|psi| {
            let mut row: Vec<f64> = states.iter().map(|s| s.amplitudes.dotc(psi).norm_sqr()).collect();
            let inside: f64 = row.iter().sum();
            row.push((psi.norm_squared() - inside).max(0.0));
            row
        })
        .collect();

    Trajectory::new(labels, traj.times().to_vec(), populations, None)
}

/// Weight of `amps` inside the permutation-symmetric subspace.
pub fn symmetric_weight(basis: &FullEnsembleBasis, amps: &DVector<C64>) -> Result<f64> {
    if amps.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: amps.len(),
        });
    }
    let mut sums: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    for (i, a) in amps.iter().enumerate() {
        *sums.entry(basis.occupation(i)).or_default() += a;
    }
    Ok(sums
        .into_iter()
        .map(|((g, c), s)| s.norm_sqr() / class_size(basis.n_atoms(), g, c) as f64)
        .sum())
}

/// A coupling from a kept collective state to a symmetric state the
/// truncation leaves out.
#[derive(Debug, Clone, PartialEq)]
pub struct DroppedCoupling {
    pub from: CollectiveLabel,
    /// Known label name, or `g<n>c<m>` for unnamed occupation classes.
    pub to: String,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub projected: HamiltonianMatrix,
    pub dropped: Vec<DroppedCoupling>,
    /// Largest norm of H|kept⟩ outside the symmetric subspace; zero up to
    /// rounding because H_full is permutation invariant.
    pub asymmetric_residual: f64,
}

fn class_name(n_g: usize, n_c: usize) -> String {
    CollectiveLabel::ALL
        .iter()
        .find(|l| l.occupation() == (n_g, n_c))
        .map(|l| l.as_str().to_string())
        .unwrap_or_else(|| format!("g{n_g}c{n_c}"))
}

/// Projects H_full onto `kept` and lists every coupling from a kept state
/// into a symmetric state not in `kept` with magnitude above `threshold`.
pub fn truncation_report(p: &DriveParams, kept: &[CollectiveLabel], threshold: f64) -> Result<TruncationReport> {
    let h = FullEnsembleHamiltonian::new(p)?;
    let basis = *h.basis();
    let states = kept
        .iter()
        .map(|&l| build_collective_state_capped(l, p.n_atoms(), basis.n_atoms()))
        .collect::<Result<Vec<_>>>()?;

    let n = basis.n_atoms();
    let classes: Vec<(usize, usize)> = (0..=n)
        .flat_map(|g| (0..=n - g).map(move |c| (g, c)))
        .filter(|occ| !kept.iter().any(|l| l.occupation() == *occ))
        .collect();

    let k = states.len();
    let mut projected = DMatrix::<C64>::zeros(k, k);
    let mut dropped = Vec::new();
    let mut asymmetric_residual: f64 = 0.0;
    for (j, ket) in states.iter().enumerate() {
        let image = h.apply(&ket.amplitudes)?;
        let mut rest = image.clone();
        for (i, bra) in states.iter().enumerate() {
            let z = bra.amplitudes.dotc(&image);
            projected[(i, j)] = z;
            rest -= &bra.amplitudes * z;
        }
        for &(g, c) in &classes {
            let v = class_vector(&basis, g, c);
            let z = v.dotc(&image);
            rest -= &v * z;
            if z.norm() > threshold {
                dropped.push(DroppedCoupling {
                    from: ket.label,
                    to: class_name(g, c),
                    value: z.re,
                });
            }
        }
        asymmetric_residual = asymmetric_residual.max(rest.norm());
    }
    // average away rounding so the Hermitian check is exact
    let projected = (&projected + projected.adjoint()) * C64::new(0.5, 0.0);
    let labels = kept.iter().map(|l| l.as_str().to_string()).collect();
    Ok(TruncationReport {
        projected: HamiltonianMatrix::new(labels, projected)?,
        dropped,
        asymmetric_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::AtomLevel;

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(3, 0, 0), 1);
        assert_eq!(class_size(3, 1, 1), 6);
        assert_eq!(class_size(5, 2, 0), 10);
        assert_eq!(class_size(6, 2, 1), 60);
        assert_eq!(class_size(6, 2, 1), 3 * 20);
    }

    #[test]
    fn ground_state_is_single_product_state() {
        let s = build_collective_state(CollectiveLabel::A, 3).unwrap();
        let nonzero: Vec<usize> = (0..27).filter(|&i| s.amplitudes()[i].norm() > 0.0).collect();
        assert_eq!(nonzero, vec![0]);
        assert_eq!(s.amplitudes()[0], C64::new(1.0, 0.0));
    }

    #[test]
    fn single_flip_state_n3() {
        let s = build_collective_state(CollectiveLabel::G1, 3).unwrap();
        let b = s.basis();
        use AtomLevel::*;
        for levels in [[G, A, A], [A, G, A], [A, A, G]] {
            let i = b.index_of(&levels).unwrap();
            assert!((s.amplitudes()[i].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(s.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 3);
    }

    #[test]
    fn mixed_state_n3_has_six_terms() {
        let s = build_collective_state(CollectiveLabel::G11, 3).unwrap();
        let nonzero: Vec<f64> = s.amplitudes().iter().filter(|z| z.norm() > 0.0).map(|z| z.re).collect();
        assert_eq!(nonzero.len(), 6);
        for a in nonzero {
            assert!((a - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn label_needs_enough_atoms() {
        assert!(matches!(
            build_collective_state(CollectiveLabel::G21, 2),
            Err(Error::IncompatibleLabel { needed: 3, .. })
        ));
        assert!(matches!(
            build_collective_state(CollectiveLabel::A, 9),
            Err(Error::TooManyAtoms { .. })
        ));
    }

    #[test]
    fn coupling_checks_atom_count() {
        let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, 4).unwrap();
        let a3 = build_collective_state(CollectiveLabel::A, 3).unwrap();
        let g4 = build_collective_state(CollectiveLabel::G1, 4).unwrap();
        assert!(coupling_matrix_element(&g4, &a3, &p).is_err());
        let a4 = build_collective_state(CollectiveLabel::A, 4).unwrap();
        let z = coupling_matrix_element(&g4, &a4, &p).unwrap();
        assert!((z.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_needs_amplitudes() {
        let traj = Trajectory::new(vec!["x".into()], vec![0.0, 1.0], vec![vec![1.0], vec![1.0]], None).unwrap();
        assert_eq!(project_trajectory(&traj, &[]).unwrap_err(), Error::MissingAmplitudes);
    }

    #[test]
    fn symmetric_weight_of_antisymmetric_state_is_zero() {
        let basis = FullEnsembleBasis::new(2, 8).unwrap();
        let mut v = DVector::<C64>::zeros(9);
        v[basis.index_of(&[AtomLevel::G, AtomLevel::A]).unwrap()] = C64::new(1.0 / 2f64.sqrt(), 0.0);
        v[basis.index_of(&[AtomLevel::A, AtomLevel::G]).unwrap()] = C64::new(-1.0 / 2f64.sqrt(), 0.0);
        assert!(symmetric_weight(&basis, &v).unwrap() < 1e-30);
    }

    #[test]
    fn truncation_report_names_dropped_states() {
        let p = DriveParams::new(1.0, 0.1, 10.0, 0.0, 4).unwrap();
        let kept = [CollectiveLabel::A, CollectiveLabel::G1, CollectiveLabel::C1];
        let r = truncation_report(&p, &kept, 1e-12).unwrap();
        let targets: Vec<(&str, &str)> = r.dropped.iter().map(|d| (d.from.as_str(), d.to.as_str())).collect();
        assert_eq!(targets, vec![("G1", "G2"), ("C1", "G11")]);
        // √(N−1)·√2·Ω₁/2 for G1 → G2 at N = 4
        assert!((r.dropped[0].value - 6f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(r.asymmetric_residual < 1e-12);
    }
}
