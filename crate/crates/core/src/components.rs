//! Elementary optical components and driven-output evaluation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::slh::SlhModel;

/// Coherent input amplitudes, one per port.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveAmplitudes(DVector<Complex64>);

impl DriveAmplitudes {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self(DVector::from_vec(amplitudes))
    }

    /// Drive only port `port` (1-indexed) with amplitude `alpha`.
    pub fn single(ports: usize, port: usize, alpha: Complex64) -> Result<Self> {
        if port == 0 || port > ports {
            return Err(Error::PortOutOfRange { index: port, ports });
        }
        let mut v = DVector::zeros(ports);
        v[port - 1] = alpha;
        Ok(Self(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// `Φ_φ`: a single-path phase shift, `S = [e^{iφ}]`.
pub fn phase_shift(phi: f64) -> Result<SlhModel> {
    finite("phase", phi)?;
    SlhModel::passive(DMatrix::from_element(1, 1, Complex64::from_polar(1.0, phi)))
}

/// `B_θ`: real rotation-matrix beamsplitter `[[cos θ, -sin θ], [sin θ, cos θ]]`.
pub fn beamsplitter(theta: f64) -> Result<SlhModel> {
    finite("mixing angle", theta)?;
    let (s, c) = theta.sin_cos();
    SlhModel::passive(DMatrix::from_row_slice(
        2,
        2,
        &[c.into(), (-s).into(), s.into(), c.into()],
    ))
}

/// `W_α`: identity scattering with coupling `α`. Drive a circuit `g` with
/// `series(g, coherent_drive(α))`.
pub fn coherent_drive(alpha: &DriveAmplitudes) -> Result<SlhModel> {
    let n = alpha.len();
    SlhModel::new(DMatrix::identity(n, n), alpha.0.clone(), 0.0)
}

/// Output field amplitudes `S α` of an undriven passive circuit.
pub fn output_amplitudes(circuit: &SlhModel, alpha: &DriveAmplitudes) -> Result<DVector<Complex64>> {
    if alpha.len() != circuit.ports() {
        return Err(Error::LengthMismatch { expected: circuit.ports(), found: alpha.len() });
    }
    if !circuit.is_undriven() {
        return Err(Error::DrivenCircuit);
    }
    Ok(circuit.scattering() * &alpha.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slh::{identity, series};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phase_shift_values() {
        assert_eq!(phase_shift(0.0).unwrap().s(1, 1), c(1.0, 0.0));
        assert!((phase_shift(PI).unwrap().s(1, 1) - c(-1.0, 0.0)).norm() < 1e-15);
        let g = series(&phase_shift(0.4).unwrap(), &phase_shift(0.9).unwrap()).unwrap();
        assert!((g.s(1, 1) - Complex64::from_polar(1.0, 1.3)).norm() < 1e-15);
        assert!(phase_shift(f64::INFINITY).is_err());
    }

    #[test]
    fn beamsplitter_values() {
        assert_eq!(beamsplitter(0.0).unwrap(), identity(2).unwrap());
        let b = beamsplitter(FRAC_PI_4).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = [[h, -h], [h, h]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((b.scattering()[(i, j)] - c(expected[i][j], 0.0)).norm() < 1e-15);
            }
        }
        let round = series(&beamsplitter(-FRAC_PI_4).unwrap(), &b).unwrap();
        assert!(round.max_abs_diff(&identity(2).unwrap()).unwrap() < 1e-15);
        assert!(beamsplitter(f64::NAN).is_err());
    }

    #[test]
    fn drives() {
        let vac = coherent_drive(&DriveAmplitudes::new(vec![c(0.0, 0.0); 2])).unwrap();
        assert_eq!(vac, identity(2).unwrap());

        let (a1, a2) = (c(0.3, -1.2), c(2.0, 0.5));
        let g = series(&beamsplitter(FRAC_PI_4).unwrap(), &coherent_drive(&DriveAmplitudes::new(vec![a1, a2])).unwrap()).unwrap();
        assert!((g.coupling()[0] - (a1 - a2) * FRAC_1_SQRT_2).norm() < 1e-15);
        assert!((g.coupling()[1] - (a1 + a2) * FRAC_1_SQRT_2).norm() < 1e-15);
        assert_eq!(g.hamiltonian(), 0.0);

        let a = c(0.7, 0.1);
        let g = series(&phase_shift(1.9).unwrap(), &coherent_drive(&DriveAmplitudes::new(vec![a])).unwrap()).unwrap();
        assert!((g.coupling()[0] - Complex64::from_polar(1.0, 1.9) * a).norm() < 1e-15);
    }

    #[test]
    fn output_amplitude_contracts() {
        let alpha = DriveAmplitudes::new(vec![c(1.0, 2.0), c(-0.5, 0.0)]);
        let out = output_amplitudes(&identity(2).unwrap(), &alpha).unwrap();
        assert_eq!(&out, alpha.as_vector());

        assert!(matches!(
            output_amplitudes(&identity(3).unwrap(), &alpha),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        ));
        let driven = coherent_drive(&alpha).unwrap();
        assert_eq!(output_amplitudes(&driven, &alpha), Err(Error::DrivenCircuit));
        assert!(DriveAmplitudes::single(2, 3, c(1.0, 0.0)).is_err());
    }
}
