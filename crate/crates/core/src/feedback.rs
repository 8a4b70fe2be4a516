//! Feedback-loop selectors.
//!
//! The binary feedback selector is
//!
//! ```text
//! F(φ, μ) = [(Φ_μ ⊞ I_1) ◁ B_{-π/4} ◁ (Φ_φ ⊞ I_1) ◁ B_{π/4}]_{1→1}
//! ```
//!
//! a Mach-Zehnder switch whose port-1 output loops back through the memory
//! phase into port 1. Its single-port scattering is
//!
//! ```text
//! S(φ, μ) = (1 + e^{iφ} - 2 e^{i(φ+μ)}) / (2 - e^{iμ} - e^{i(φ+μ)})
//! ```
//!
//! so `S(0, μ) = 1` and `S(π, μ) = e^{iμ}`. The only singular point is
//! `(φ, μ) ≡ (0, 0)`, where the limit is 1.
//!
//! The weighted selector replaces `φ` by `2φ` and `μ` by `μ - φ` inside the
//! loop and adds `Φ_{π-φ}` on the output, which reduces to
//! `(e^{iμ} - cos φ) / (1 - e^{iμ} cos φ)`. For small `μ` its output phase
//! is `μ cot²(φ/2)`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::components::{beamsplitter, phase_shift};
use crate::error::{Error, Result};
use crate::phase::{wrap_symmetric, wrap_two_pi, ControlPhase};
use crate::slh::{concat, feedback, identity, series, series_chain, SlhModel};

/// Denominators with modulus below this mark a singular parameter point.
pub const SINGULAR_EPS: f64 = 1e-9;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// What to do at the removable singularity of the binary feedback selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularPolicy {
    #[default]
    Reject,
    /// Return the limit `S = [1]`.
    RemovableLimit,
}

fn finite(phi: f64, mu: f64) -> Result<()> {
    if !phi.is_finite() {
        return Err(Error::NonFinite { name: "control phase", value: phi });
    }
    if !mu.is_finite() {
        return Err(Error::NonFinite { name: "memory phase", value: mu });
    }
    Ok(())
}

/// Open-loop two-port circuit before port 1 is fed back.
fn open_loop(loop_phase: f64, control_phase: f64) -> Result<SlhModel> {
    let id = identity(1)?;
    series_chain(&[
        beamsplitter(FRAC_PI_4)?,
        concat(&phase_shift(control_phase)?, &id),
        beamsplitter(-FRAC_PI_4)?,
        concat(&phase_shift(loop_phase)?, &id),
    ])
}

fn close_loop(open: &SlhModel, phi: f64, mu: f64) -> Result<SlhModel> {
    feedback(open, 1, 1).map_err(|e| match e {
        Error::SingularLoop { .. } => Error::SingularPoint { phi, mu },
        other => other,
    })
}

/// `F(φ, μ)` by generic feedback elimination.
pub fn build_feedback_selector(phi: f64, mu: f64, policy: SingularPolicy) -> Result<SlhModel> {
    finite(phi, mu)?;
    match close_loop(&open_loop(mu, phi)?, phi, mu) {
        Err(Error::SingularPoint { .. }) if policy == SingularPolicy::RemovableLimit => identity(1),
        other => other,
    }
}

/// Closed-form `S(φ, μ)` of the binary feedback selector.
pub fn feedback_selector_scattering(phi: f64, mu: f64) -> Result<Complex64> {
    finite(phi, mu)?;
    let e_phi = Complex64::from_polar(1.0, phi);
    let e_mu = Complex64::from_polar(1.0, mu);
    let e_both = Complex64::from_polar(1.0, phi + mu);
    let numerator = ONE + e_phi - 2.0 * e_both;
    let denominator = 2.0 - e_mu - e_both;
    if denominator.norm() < SINGULAR_EPS {
        return Err(Error::SingularPoint { phi, mu });
    }
    Ok(numerator / denominator)
}

/// Phase accumulated by a series of binary feedback selectors, in `[0, 2π)`.
///
/// Each control phase must be exactly `0` or `π`; the selector is
/// `s = φ / π` with no compilation step and no tail phase.
pub fn chain_feedback_selectors(mu: &[f64], phi: &[f64]) -> Result<f64> {
    if mu.len() != phi.len() {
        return Err(Error::LengthMismatch { expected: mu.len(), found: phi.len() });
    }
    let controls = phi
        .iter()
        .map(|&p| ControlPhase::from_radians(p))
        .collect::<Result<Vec<_>>>()?;
    let stages = mu
        .iter()
        .zip(&controls)
        .map(|(&m, c)| build_feedback_selector(c.radians(), m, SingularPolicy::RemovableLimit))
        .collect::<Result<Vec<_>>>()?;
    if stages.is_empty() {
        return Ok(0.0);
    }
    let total = series_chain(&stages)?;
    Ok(wrap_two_pi(total.s(1, 1).arg()))
}

/// `Φ_{π-φ} ◁ [(Φ_{μ-φ} ⊞ I_1) ◁ B_{-π/4} ◁ (Φ_{2φ} ⊞ I_1) ◁ B_{π/4}]_{1→1}`.
pub fn build_weighted_selector(phi: f64, mu: f64) -> Result<SlhModel> {
    finite(phi, mu)?;
    if weighted_denominator(phi, mu).norm() < SINGULAR_EPS {
        return Err(Error::SingularPoint { phi, mu });
    }
    let inner = close_loop(&open_loop(mu - phi, 2.0 * phi)?, phi, mu)?;
    series(&phase_shift(PI - phi)?, &inner)
}

fn weighted_denominator(phi: f64, mu: f64) -> Complex64 {
    ONE - Complex64::from_polar(phi.cos(), mu)
}

/// Closed-form weighted-selector scattering `(e^{iμ} - cos φ)/(1 - e^{iμ} cos φ)`.
pub fn weighted_selector_scattering(phi: f64, mu: f64) -> Result<Complex64> {
    finite(phi, mu)?;
    let denominator = weighted_denominator(phi, mu);
    if denominator.norm() < SINGULAR_EPS {
        return Err(Error::SingularPoint { phi, mu });
    }
    Ok((Complex64::from_polar(1.0, mu) - phi.cos()) / denominator)
}

/// Output phase of the weighted selector, in `(-π, π]`.
///
/// This is the principal argument of the built circuit's scattering. The
/// arctangent expression `4 sin²φ sin μ / (2(3 + cos 2φ) cos μ - 8 cos φ)`
/// agrees with it modulo π.
pub fn weighted_output_phase(phi: f64, mu: f64) -> Result<f64> {
    let g = build_weighted_selector(phi, mu)?;
    Ok(wrap_symmetric(g.s(1, 1).arg()))
}

/// Ratio whose arctangent is the weighted output phase (mod π).
pub fn weighted_tangent(phi: f64, mu: f64) -> (f64, f64) {
    let num = 4.0 * phi.sin().powi(2) * mu.sin();
    let den = 2.0 * (3.0 + (2.0 * phi).cos()) * mu.cos() - 8.0 * phi.cos();
    (num, den)
}

/// Small-signal gain `dμ_out/dμ` at `μ = 0`, equal to `cot²(φ/2)`.
pub fn weighted_small_mu_gain(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::NonFinite { name: "control phase", value: phi });
    }
    let half = (phi / 2.0).sin();
    if wrap_symmetric(phi).abs() < SINGULAR_EPS || half == 0.0 {
        return Err(Error::DivergentGain(phi));
    }
    let cot = (phi / 2.0).cos() / half;
    Ok(cot * cot)
}

/// Sampled `(μ, φ, μ_out)` points of the weighted selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSample {
    pub phi: f64,
    pub mu: f64,
    pub mu_out: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransferCurve {
    pub samples: Vec<TransferSample>,
}

impl TransferCurve {
    /// Samples with control phase exactly `phi`.
    pub fn for_phi(&self, phi: f64) -> impl Iterator<Item = &TransferSample> {
        self.samples.iter().filter(move |s| s.phi == phi)
    }
}

/// Evaluates the weighted output phase on `phis × mu_grid`, φ-major and
/// keeping the grid order within each φ.
pub fn sweep_transfer(phis: &[f64], mu_grid: &[f64]) -> Result<TransferCurve> {
    let mut samples = Vec::with_capacity(phis.len() * mu_grid.len());
    for &phi in phis {
        for &mu in mu_grid {
            let mu_out = weighted_output_phase(phi, mu)?;
            samples.push(TransferSample { phi, mu, mu_out });
        }
    }
    Ok(TransferCurve { samples })
}

/// `count` cell midpoints of `(lo, hi)`; symmetric and open at both ends.
pub fn midpoint_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / count as f64;
    (0..count).map(|j| lo + (j as f64 + 0.5) * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::circular_distance;

    #[test]
    fn binary_control_values() {
        let g = build_feedback_selector(0.0, 0.7, SingularPolicy::Reject).unwrap();
        assert!((g.s(1, 1) - ONE).norm() < 1e-12);
        let g = build_feedback_selector(PI, 0.7, SingularPolicy::Reject).unwrap();
        assert!((g.s(1, 1) - Complex64::from_polar(1.0, 0.7)).norm() < 1e-12);
        assert!(g.is_undriven());
    }

    #[test]
    fn removable_point() {
        assert!(matches!(
            build_feedback_selector(0.0, 0.0, SingularPolicy::Reject),
            Err(Error::SingularPoint { .. })
        ));
        let g = build_feedback_selector(0.0, 0.0, SingularPolicy::RemovableLimit).unwrap();
        assert_eq!(g.s(1, 1), ONE);
        assert!(matches!(feedback_selector_scattering(0.0, 0.0), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn closed_form_matches_elimination() {
        for &(phi, mu) in &[(PI / 3.0, 1.0), (PI / 2.0, 2.0), (0.0, 1.9), (PI, 5.5), (4.0, -2.0)] {
            let closed = feedback_selector_scattering(phi, mu).unwrap();
            let built = build_feedback_selector(phi, mu, SingularPolicy::Reject).unwrap().s(1, 1);
            assert!((closed - built).norm() < 1e-12, "({phi}, {mu})");
            assert!((closed.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chained_selectors() {
        assert_eq!(chain_feedback_selectors(&[0.3, 0.7], &[0.0, 0.0]).unwrap(), 0.0);
        assert!((chain_feedback_selectors(&[0.3, 0.7, 1.1], &[0.0, PI, PI]).unwrap() - 1.8).abs() < 1e-12);
        let two = chain_feedback_selectors(&[2.0, 3.0], &[PI, PI]).unwrap();
        assert!(circular_distance(two, 5.0) < 1e-12);
        assert!(matches!(chain_feedback_selectors(&[0.1], &[0.5]), Err(Error::ControlPhaseDomain(_))));
        assert!(chain_feedback_selectors(&[0.1], &[]).is_err());
        // (0, 0) is bridged by the removable limit
        assert_eq!(chain_feedback_selectors(&[0.0, 0.4], &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn weighted_special_controls() {
        for mu in [-2.5, -0.3, 0.0, 0.4, 1.7, 3.0] {
            let g = build_weighted_selector(PI / 2.0, mu).unwrap();
            assert!((g.s(1, 1) - Complex64::from_polar(1.0, mu)).norm() < 1e-12);
        }
        for mu in [-2.5, -0.3, 0.4, 1.7] {
            assert!(weighted_output_phase(PI, mu).unwrap().abs() < 1e-12);
        }
        assert!(matches!(build_weighted_selector(PI, PI), Err(Error::SingularPoint { .. })));
        assert!(matches!(build_weighted_selector(0.0, 0.0), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn weighted_closed_form_and_phase() {
        let (phi, mu) = (1.0, 0.2);
        let built = build_weighted_selector(phi, mu).unwrap().s(1, 1);
        let closed = weighted_selector_scattering(phi, mu).unwrap();
        assert!((built - closed).norm() < 1e-12);
        assert!((weighted_output_phase(phi, mu).unwrap() - closed.arg()).abs() < 1e-12);
        assert!((weighted_output_phase(PI / 2.0, 0.4).unwrap() - 0.4).abs() < 1e-12);
        let small = weighted_output_phase(2.0 * PI / 3.0, 0.01).unwrap();
        assert!((small - 0.01 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn gain_values() {
        assert!((weighted_small_mu_gain(PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(weighted_small_mu_gain(PI).unwrap() < 1e-30);
        assert!(matches!(weighted_small_mu_gain(0.0), Err(Error::DivergentGain(_))));
        assert!(matches!(weighted_small_mu_gain(2.0 * PI), Err(Error::DivergentGain(_))));
    }

    #[test]
    fn sweep_order_and_errors() {
        let grid = midpoint_grid(-PI, PI, 5);
        assert_eq!(grid.len(), 5);
        assert!(grid[2].abs() < 1e-15);
        let curve = sweep_transfer(&[PI / 2.0, PI], &grid).unwrap();
        assert_eq!(curve.samples.len(), 10);
        assert!(curve.samples[..5].iter().all(|s| s.phi == PI / 2.0));
        assert!(curve.samples.windows(2).take(4).all(|w| w[0].mu < w[1].mu));
        assert!(curve.for_phi(PI).all(|s| s.mu_out.abs() < 1e-12));
        assert_eq!(
            sweep_transfer(&[PI], &[0.0, PI]),
            Err(Error::SingularPoint { phi: PI, mu: PI })
        );
    }
}
