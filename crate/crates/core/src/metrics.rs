//! Quantum Fisher information and l1-norm coherence of the atom state.

use nalgebra::Matrix2;

use crate::dynamics::{state_from_amplitude, AmplitudeSeries, QubitState, SystemConfig, AMPLITUDE_SLACK, C64};
use crate::error::{Error, Result};

/// Determinant floor for the 2x2 QFI formula.
pub const EPS_DET: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qfi {
    pub phi: f64,
    pub theta: f64,
}

/// Closed-form QFI for the phase and polar angle:
/// `F_phi = |p|^2 sin^2(theta)`, `F_theta = |p|^2`.
pub fn qfi_closed(p: C64, theta: f64) -> Result<Qfi> {
    let mag2 = p.norm_sqr();
    if mag2.is_nan() || mag2.sqrt() > 1.0 + AMPLITUDE_SLACK {
        return Err(Error::InvalidAmplitude(mag2.sqrt()));
    }
    let s = theta.sin();
    Ok(Qfi { phi: mag2 * s * s, theta: mag2 })
}

/// QFI of a full-rank qubit state for a parameter with derivative `drho`:
/// `Tr[(drho)^2] + Tr[(rho drho)^2] / det(rho)`.
pub fn qfi_general_2x2(rho: &QubitState, drho: &Matrix2<C64>) -> Result<f64> {
    let herm = (drho - drho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if herm > 1e-10 {
        return Err(Error::param("drho", format!("not Hermitian (deviation {herm:e})")));
    }
    let det = rho.determinant();
    if det <= EPS_DET {
        return Err(Error::PureStateSingularity(det));
    }
    let rd = rho.matrix() * drho;
    let first = (drho * drho).trace().re;
    let second = (rd * rd).trace().re;
    Ok(first + second / det)
}

/// Sum of the moduli of the off-diagonal entries.
pub fn coherence_l1(rho: &QubitState) -> f64 {
    let m = rho.matrix();
    m[(0, 1)].norm() + m[(1, 0)].norm()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSample {
    pub t: f64,
    pub f_phi: f64,
    pub f_theta: f64,
    pub c_l1: f64,
    /// `|C_l1^2 - F_phi|`.
    pub relation_residual: f64,
}

pub fn metric_sample(t: f64, p: C64, theta: f64, phi: f64) -> Result<MetricSample> {
    let rho = state_from_amplitude(p, theta, phi)?;
    let qfi = qfi_closed(p, theta)?;
    let c_l1 = coherence_l1(&rho);
    Ok(MetricSample { t, f_phi: qfi.phi, f_theta: qfi.theta, c_l1, relation_residual: (c_l1 * c_l1 - qfi.phi).abs() })
}

pub fn metric_series(cfg: &SystemConfig, amps: &AmplitudeSeries) -> Result<Vec<MetricSample>> {
    amps.times.iter().zip(&amps.p).map(|(&t, &p)| metric_sample(t, p, cfg.theta, cfg.phi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{amplitude, RateMode, TimeGrid};
    use crate::spectral::SpectralModel;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn closed_form_examples() {
        let q = qfi_closed(C64::new(1.0, 0.0), FRAC_PI_2).unwrap();
        assert_eq!((q.phi, q.theta), (1.0, 1.0));
        let p = C64::new(0.3, 0.4);
        let q = qfi_closed(p, 0.0).unwrap();
        assert_eq!(q.phi, 0.0);
        assert!(close(q.theta, 0.25, 1e-15));
        assert!(qfi_closed(C64::new(1.1, 0.0), 1.0).is_err());
    }

    #[test]
    fn general_formula_edge_cases() {
        let rho =
            QubitState(Matrix2::new(C64::new(0.3, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.7, 0.0)));
        assert_eq!(qfi_general_2x2(&rho, &Matrix2::zeros()).unwrap(), 0.0);
        let pure = state_from_amplitude(C64::new(1.0, 0.0), FRAC_PI_2, 0.0).unwrap();
        assert!(matches!(qfi_general_2x2(&pure, &Matrix2::zeros()), Err(Error::PureStateSingularity(_))));
        let skew = Matrix2::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0));
        assert!(qfi_general_2x2(&rho, &skew).is_err());
    }

    // Central-difference derivative of the state with respect to phi or theta.
    fn fd_derivative(p: C64, theta: f64, phi: f64, wrt_phi: bool) -> Matrix2<C64> {
        let h = 1e-6;
        let (plus, minus) = if wrt_phi {
            (state_from_amplitude(p, theta, phi + h), state_from_amplitude(p, theta, phi - h))
        } else {
            (state_from_amplitude(p, theta + h, phi), state_from_amplitude(p, theta - h, phi))
        };
        (plus.unwrap().0 - minus.unwrap().0) / C64::new(2.0 * h, 0.0)
    }

    #[test]
    fn finite_difference_oracle_matches_closed_form() {
        let p = C64::from_polar(0.5f64.sqrt(), 0.4);
        let rho = state_from_amplitude(p, FRAC_PI_2, 0.0).unwrap();
        let f = qfi_general_2x2(&rho, &fd_derivative(p, FRAC_PI_2, 0.0, true)).unwrap();
        assert!(close(f, 0.5, 1e-6), "{f}");

        let rho = state_from_amplitude(p, FRAC_PI_3, 0.3).unwrap();
        let f = qfi_general_2x2(&rho, &fd_derivative(p, FRAC_PI_3, 0.3, false)).unwrap();
        assert!(close(f, 0.5, 1e-6), "{f}");
    }

    #[test]
    fn coherence_examples() {
        let rho = state_from_amplitude(C64::new(1.0, 0.0), FRAC_PI_2, 0.0).unwrap();
        assert!(close(coherence_l1(&rho), 1.0, 1e-15));
        let rho = state_from_amplitude(C64::new(0.6, 0.2), 0.0, 0.0).unwrap();
        assert_eq!(coherence_l1(&rho), 0.0);
    }

    #[test]
    fn series_examples() {
        let theta = 1.1;
        let cfg = SystemConfig::new(1.0, 0.3, SpectralModel::ohmic(3.0)).with_angles(theta, 0.0);
        let one = TimeGrid::new(1.0, 1).unwrap();
        let amps = amplitude(&cfg, &one, &RateMode::Disabled).unwrap();
        let s = metric_series(&cfg, &amps).unwrap()[0];
        assert_eq!(s.t, 0.0);
        assert!(close(s.f_phi, theta.sin().powi(2), 1e-15));
        assert_eq!(s.f_theta, 1.0);
        assert!(close(s.c_l1, theta.sin(), 1e-15));
        assert!(s.relation_residual < 1e-15);

        // Lossless: F_phi = cos^2(Omega t) at theta = pi/2.
        let cfg = SystemConfig::new(1.0, 0.3, SpectralModel::ohmic(3.0));
        let grid = TimeGrid::new(PI / 0.3, 50).unwrap();
        let amps = amplitude(&cfg, &grid, &RateMode::Disabled).unwrap();
        for s in metric_series(&cfg, &amps).unwrap() {
            assert!(close(s.f_phi, (0.3 * s.t).cos().powi(2), 1e-14));
        }
    }
}
