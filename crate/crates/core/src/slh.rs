//! SLH triplets for passive circuits and the three composition rules.
//!
//! `series(g2, g1)` feeds every output of `g1` into the matching input of
//! `g2` (written `g2 ◁ g1`). `concat(g1, g2)` places two systems side by
//! side with `g1` on the lower-numbered ports. `feedback(g, k, l)` closes
//! output `k` onto input `l`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Loops with `|1 - S[k,l]|` at or below this are rejected as singular.
pub const FEEDBACK_EPS: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// An `(S, L, H)` triplet whose entries are all numbers, never operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SlhModel {
    scattering: DMatrix<Complex64>,
    coupling: DVector<Complex64>,
    hamiltonian: f64,
}

impl SlhModel {
    pub fn new(
        scattering: DMatrix<Complex64>,
        coupling: DVector<Complex64>,
        hamiltonian: f64,
    ) -> Result<Self> {
        let (rows, cols) = scattering.shape();
        if rows == 0 {
            return Err(Error::ZeroPorts);
        }
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if coupling.len() != rows {
            return Err(Error::Shape(format!(
                "{rows}-port scattering matrix with a length-{} coupling vector",
                coupling.len()
            )));
        }
        if !hamiltonian.is_finite() {
            return Err(Error::NonFinite { name: "hamiltonian", value: hamiltonian });
        }
        Ok(Self { scattering, coupling, hamiltonian })
    }

    /// Model with the given scattering matrix and `L = 0`, `H = 0`.
    pub fn passive(scattering: DMatrix<Complex64>) -> Result<Self> {
        let n = scattering.nrows();
        Self::new(scattering, DVector::zeros(n), 0.0)
    }

    pub fn ports(&self) -> usize {
        self.scattering.nrows()
    }

    pub fn scattering(&self) -> &DMatrix<Complex64> {
        &self.scattering
    }

    pub fn coupling(&self) -> &DVector<Complex64> {
        &self.coupling
    }

    pub fn hamiltonian(&self) -> f64 {
        self.hamiltonian
    }

    /// Entry of `S` using 1-indexed ports.
    pub fn s(&self, row: usize, col: usize) -> Complex64 {
        self.scattering[(row - 1, col - 1)]
    }

    /// True when `L = 0` and `H = 0` exactly.
    pub fn is_undriven(&self) -> bool {
        self.hamiltonian == 0.0 && self.coupling.iter().all(|c| *c == ZERO)
    }

    /// Largest entrywise distance to `other` across S, L and H.
    pub fn max_abs_diff(&self, other: &SlhModel) -> Option<f64> {
        if self.ports() != other.ports() {
            return None;
        }
        let s = max_entry_diff(self.scattering.iter(), other.scattering.iter());
        let l = max_entry_diff(self.coupling.iter(), other.coupling.iter());
        Some(s.max(l).max((self.hamiltonian - other.hamiltonian).abs()))
    }
}

fn max_entry_diff<'a>(
    a: impl Iterator<Item = &'a Complex64>,
    b: impl Iterator<Item = &'a Complex64>,
) -> f64 {
    a.zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// The trivial "no component" on `n` ports.
pub fn identity(n: usize) -> Result<SlhModel> {
    if n == 0 {
        return Err(Error::ZeroPorts);
    }
    SlhModel::passive(DMatrix::identity(n, n))
}

/// `g2 ◁ g1`: the outputs of `g1` drive the inputs of `g2`.
pub fn series(g2: &SlhModel, g1: &SlhModel) -> Result<SlhModel> {
    if g1.ports() != g2.ports() {
        return Err(Error::PortMismatch { left: g2.ports(), right: g1.ports() });
    }
    let s2_l1 = &g2.scattering * &g1.coupling;
    let cross = g2.coupling.dotc(&s2_l1);
    Ok(SlhModel {
        scattering: &g2.scattering * &g1.scattering,
        coupling: s2_l1 + &g2.coupling,
        hamiltonian: g1.hamiltonian + g2.hamiltonian + cross.im,
    })
}

/// Folds `series` over a list given in the order light traverses it, so
/// `series_chain([a, b, c])` is `c ◁ b ◁ a`.
pub fn series_chain<'a, I>(stages: I) -> Result<SlhModel>
where
    I: IntoIterator<Item = &'a SlhModel>,
{
    let mut iter = stages.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Spec("empty series chain".into()))?
        .clone();
    iter.try_fold(first, |acc, next| series(next, &acc))
}

/// `g1 ⊞ g2`: block-diagonal scattering with `g1` on ports `1..=n1`.
pub fn concat(g1: &SlhModel, g2: &SlhModel) -> SlhModel {
    let (n1, n2) = (g1.ports(), g2.ports());
    let n = n1 + n2;
    let mut scattering = DMatrix::zeros(n, n);
    scattering.view_mut((0, 0), (n1, n1)).copy_from(&g1.scattering);
    scattering.view_mut((n1, n1), (n2, n2)).copy_from(&g2.scattering);
    let coupling = DVector::from_iterator(n, g1.coupling.iter().chain(g2.coupling.iter()).copied());
    SlhModel {
        scattering,
        coupling,
        hamiltonian: g1.hamiltonian + g2.hamiltonian,
    }
}

/// `[g]_{k→l}`: output port `k` is fed back into input port `l` (1-indexed),
/// leaving an `(n-1)`-port model.
pub fn feedback(g: &SlhModel, k: usize, l: usize) -> Result<SlhModel> {
    let n = g.ports();
    if n < 2 {
        return Err(Error::FeedbackArity(n));
    }
    for index in [k, l] {
        if index == 0 || index > n {
            return Err(Error::PortOutOfRange { index, ports: n });
        }
    }
    let (k0, l0) = (k - 1, l - 1);
    let s = &g.scattering;
    let s_kl = s[(k0, l0)];
    let loop_gain = ONE - s_kl;
    if loop_gain.norm() <= FEEDBACK_EPS {
        return Err(Error::SingularLoop { k, l, s_kl });
    }
    let inv = ONE / loop_gain;

    let rows: Vec<usize> = (0..n).filter(|&i| i != k0).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| j != l0).collect();

    let scattering = DMatrix::from_fn(n - 1, n - 1, |i, j| {
        let (r, c) = (rows[i], cols[j]);
        s[(r, c)] + s[(r, l0)] * inv * s[(k0, c)]
    });
    let lk = g.coupling[k0];
    let coupling = DVector::from_fn(n - 1, |i, _| {
        let r = rows[i];
        g.coupling[r] + s[(r, l0)] * inv * lk
    });
    let weighted: Complex64 = (0..n).map(|j| g.coupling[j].conj() * s[(j, l0)]).sum();
    let hamiltonian = g.hamiltonian + (weighted * inv * lk).im;

    Ok(SlhModel { scattering, coupling, hamiltonian })
}

/// `max |S†S - I|` over all entries.
pub fn unitarity_error(s: &DMatrix<Complex64>) -> Result<f64> {
    let (rows, cols) = s.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let gram = s.adjoint() * s;
    Ok(gram
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            // column-major: idx = col * rows + row
            let diag = idx % rows == idx / rows;
            (v - if diag { ONE } else { ZERO }).norm()
        })
        .fold(0.0, f64::max))
}

pub fn check_unitary(s: &DMatrix<Complex64>, tol: f64) -> Result<bool> {
    Ok(unitarity_error(s)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::{beamsplitter, coherent_drive, phase_shift, DriveAmplitudes};
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_shapes() {
        let one = identity(1).unwrap();
        assert_eq!(one.scattering()[(0, 0)], ONE);
        assert_eq!(one.coupling()[0], ZERO);
        assert_eq!(one.hamiltonian(), 0.0);
        assert_eq!(identity(2).unwrap().scattering(), &DMatrix::identity(2, 2));
        assert_eq!(identity(0), Err(Error::ZeroPorts));
    }

    #[test]
    fn identity_is_series_unit() {
        let g = beamsplitter(0.37).unwrap();
        let id = identity(2).unwrap();
        assert!(series(&id, &g).unwrap().max_abs_diff(&g).unwrap() == 0.0);
        assert!(series(&g, &id).unwrap().max_abs_diff(&g).unwrap() == 0.0);
    }

    #[test]
    fn series_port_mismatch() {
        let err = series(&identity(2).unwrap(), &identity(3).unwrap()).unwrap_err();
        assert_eq!(err, Error::PortMismatch { left: 2, right: 3 });
    }

    #[test]
    fn series_hamiltonian_picks_up_cross_term() {
        // L2 = (i), S2 = 1, L1 = (1): Im(conj(i) * 1) = -1
        let g1 = SlhModel::new(DMatrix::identity(1, 1), DVector::from_element(1, ONE), 0.25).unwrap();
        let g2 = SlhModel::new(DMatrix::identity(1, 1), DVector::from_element(1, c(0.0, 1.0)), 0.5).unwrap();
        let g = series(&g2, &g1).unwrap();
        assert!((g.hamiltonian() - (0.75 - 1.0)).abs() < 1e-15);
        assert_eq!(g.coupling()[0], c(1.0, 1.0));
    }

    #[test]
    fn concat_block_order() {
        let p = phase_shift(0.9).unwrap();
        let g = concat(&p, &identity(1).unwrap());
        assert!((g.s(1, 1) - Complex64::from_polar(1.0, 0.9)).norm() < 1e-15);
        assert_eq!(g.s(2, 2), ONE);
        assert_eq!(g.s(1, 2), ZERO);

        let g = concat(&beamsplitter(0.3).unwrap(), &phase_shift(1.1).unwrap());
        assert_eq!(g.ports(), 3);
        assert!((g.s(2, 1) - c(0.3f64.sin(), 0.0)).norm() < 1e-15);
        assert!((g.s(3, 3) - Complex64::from_polar(1.0, 1.1)).norm() < 1e-15);
        assert!(check_unitary(g.scattering(), 1e-12).unwrap());
    }

    #[test]
    fn concat_stacks_couplings_in_order() {
        let a = coherent_drive(&DriveAmplitudes::new(vec![c(1.0, 0.0)])).unwrap();
        let b = coherent_drive(&DriveAmplitudes::new(vec![c(0.0, 2.0), c(3.0, 0.0)])).unwrap();
        let g = concat(&a, &b);
        let l: Vec<_> = g.coupling().iter().copied().collect();
        assert_eq!(l, vec![c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0)]);
    }

    #[test]
    fn feedback_on_balanced_beamsplitter_reflects() {
        let g = feedback(&beamsplitter(FRAC_PI_4).unwrap(), 1, 1).unwrap();
        assert_eq!(g.ports(), 1);
        assert!((g.s(1, 1) - c(-1.0, 0.0)).norm() < 1e-12);
        // c - s^2 / (1 - c) = -1 for any angle with cos != 1
        for theta in [0.2, 1.0, 2.5, -0.7] {
            let g = feedback(&beamsplitter(theta).unwrap(), 1, 1).unwrap();
            assert!((g.s(1, 1) + ONE).norm() < 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn feedback_errors() {
        let one = identity(1).unwrap();
        assert_eq!(feedback(&one, 1, 1), Err(Error::FeedbackArity(1)));
        let two = identity(2).unwrap();
        assert!(matches!(feedback(&two, 3, 1), Err(Error::PortOutOfRange { index: 3, .. })));
        assert!(matches!(feedback(&two, 1, 0), Err(Error::PortOutOfRange { index: 0, .. })));
        match feedback(&two, 2, 2) {
            Err(Error::SingularLoop { k: 2, l: 2, s_kl }) => assert_eq!(s_kl, ONE),
            other => panic!("expected singular loop, got {other:?}"),
        }
        // off-diagonal feedback on the identity has S[1,2] = 0: well posed
        let g = feedback(&two, 1, 2).unwrap();
        assert!((g.s(1, 1) - ONE).norm() < 1e-15);
    }

    #[test]
    fn feedback_uses_only_formula_entries() {
        // Three-port model; feed 3 -> 1. The result is
        // S[r,c] + S[r,1] S[3,c] / (1 - S[3,1]) over r in {1,2}, c in {2,3}.
        let s = DMatrix::from_row_slice(
            3,
            3,
            &[c(0.1, 0.2), c(0.3, -0.1), c(0.0, 0.4), c(0.5, 0.0), c(-0.2, 0.1), c(0.1, 0.1), c(0.2, 0.3), c(0.6, 0.0), c(-0.3, 0.2)],
        );
        let g = SlhModel::passive(s.clone()).unwrap();
        let fb = feedback(&g, 3, 1).unwrap();
        let inv = ONE / (ONE - s[(2, 0)]);
        for (i, r) in [0usize, 1].into_iter().enumerate() {
            for (j, col) in [1usize, 2].into_iter().enumerate() {
                let expected = s[(r, col)] + s[(r, 0)] * inv * s[(2, col)];
                assert!((fb.scattering()[(i, j)] - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn unitarity_check() {
        assert!(check_unitary(identity(3).unwrap().scattering(), 1e-12).unwrap());
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![ONE, c(0.5, 0.0)]));
        assert!(!check_unitary(&d, 1e-12).unwrap());
        let rect = DMatrix::<Complex64>::zeros(2, 3);
        assert_eq!(check_unitary(&rect, 1e-12), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn model_validation() {
        assert!(SlhModel::new(DMatrix::identity(2, 2), DVector::zeros(3), 0.0).is_err());
        assert!(SlhModel::new(DMatrix::zeros(2, 3), DVector::zeros(2), 0.0).is_err());
        assert!(SlhModel::new(DMatrix::identity(1, 1), DVector::zeros(1), f64::NAN).is_err());
    }
}
