//! Reservoir spectral densities and the dressed-transition decay rates
//! `gamma_j(t)` together with their running integrals `beta_j(t)`.
//!
//! Rates follow the convention
//!
//! ```text
//! gamma_j(t) = 2 Re \int_0^t d tau \int_{-inf}^{inf} d w' exp(i (w_j - w') tau) J(w')
//! ```
//!
//! with the frequency integral taken over the whole real line, negative
//! frequencies included. For the Ohmic density this is the conditionally
//! convergent reading of an odd function of `w'`.

use std::f64::consts::PI;

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::quadrature;

/// Spectral density family and its parameters, in the scaled units of the
/// scenario (`omega0 = 1` for Ohmic runs, `R = 1` for Lorentzian runs).
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralModel {
    /// `J(w) = (2 w / pi) wc^2 / (wc^2 + w^2)`.
    OhmicLorentzDrude { cutoff: f64 },
    /// `J(w) = (1 / 2 pi) R l^2 / ((omega0 - w - d)^2 + l^2)`, peaked at
    /// `omega0 - d`. `detuning = None` means `d` equals the atom-cavity
    /// coupling `Omega`.
    Lorentzian { rate: f64, width: f64, detuning: Option<f64> },
    /// Piecewise-linear density through `(frequency, density)` samples,
    /// zero outside the sampled range. Numeric rates only.
    Tabulated(Vec<(f64, f64)>),
}

impl SpectralModel {
    pub fn ohmic(cutoff: f64) -> Self {
        SpectralModel::OhmicLorentzDrude { cutoff }
    }

    pub fn lorentzian(rate: f64, width: f64) -> Self {
        SpectralModel::Lorentzian { rate, width, detuning: None }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be finite and > 0, got {v}")))
            }
        }
        match self {
            SpectralModel::OhmicLorentzDrude { cutoff } => positive("omega_c", *cutoff),
            SpectralModel::Lorentzian { rate, width, detuning } => {
                positive("rate", *rate)?;
                positive("lambda", *width)?;
                match detuning {
                    Some(d) if !d.is_finite() => Err(Error::param("detuning", "must be finite")),
                    _ => Ok(()),
                }
            }
            SpectralModel::Tabulated(samples) => {
                if samples.len() < 2 {
                    return Err(Error::param("samples", "need at least two samples"));
                }
                if samples.iter().any(|&(w, j)| !w.is_finite() || !j.is_finite() || j < 0.0) {
                    return Err(Error::param("samples", "densities must be finite and >= 0"));
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::param("samples", "frequencies must be strictly increasing"));
                }
                Ok(())
            }
        }
    }

    /// Binds the model to the atom frequency and coupling that fix the
    /// Lorentzian peak position.
    pub fn bind(&self, omega0: f64, coupling: f64) -> Reservoir<'_> {
        let center = match self {
            SpectralModel::Lorentzian { detuning, .. } => omega0 - detuning.unwrap_or(coupling),
            _ => 0.0,
        };
        Reservoir { model: self, center }
    }
}

/// Integration settings for the numeric rate oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Core window half-width in units of the widest spectral scale.
    pub freq_window: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { freq_window: 50.0, abs_tol: 1e-10, rel_tol: 1e-8, max_subdivisions: 10_000 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::param("tolerance", "tolerances must be > 0"));
        }
        if self.freq_window.is_nan() || self.freq_window < 10.0 {
            return Err(Error::param("freq_window", format!("must be >= 10, got {}", self.freq_window)));
        }
        if self.max_subdivisions < 100 {
            return Err(Error::param("max_subdivisions", "must be >= 100"));
        }
        Ok(())
    }
}

/// Density value with a flag for tabulated queries outside the sampled
/// range (the value is then zero).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    pub out_of_range: bool,
}

/// A spectral model bound to a concrete Lorentzian peak position.
#[derive(Clone, Copy, Debug)]
pub struct Reservoir<'a> {
    model: &'a SpectralModel,
    /// Lorentzian peak frequency `omega0 - d`; unused for other families.
    center: f64,
}

impl<'a> Reservoir<'a> {
    pub fn model(&self) -> &'a SpectralModel {
        self.model
    }

    /// `J(w')`.
    pub fn density(&self, omega: f64) -> f64 {
        self.eval_density(omega).value
    }

    pub fn eval_density(&self, omega: f64) -> DensityValue {
        let value = match *self.model {
            SpectralModel::OhmicLorentzDrude { cutoff } => {
                let wc2 = cutoff * cutoff;
                2.0 * omega / PI * wc2 / (wc2 + omega * omega)
            }
            SpectralModel::Lorentzian { rate, width, .. } => {
                let x = self.center - omega;
                rate * width * width / (2.0 * PI * (x * x + width * width))
            }
            SpectralModel::Tabulated(ref samples) => {
                return interpolate(samples, omega);
            }
        };
        DensityValue { value, out_of_range: false }
    }

    /// Closed-form `gamma_j(t)`; may be negative.
    pub fn gamma_closed(&self, omega_j: f64, t: f64) -> Result<f64> {
        match *self.model {
            SpectralModel::OhmicLorentzDrude { cutoff: wc } => {
                let damp = (-wc * t).exp();
                let (s, c) = (omega_j * t).sin_cos();
                let pref = 4.0 * wc * wc / (omega_j * omega_j + wc * wc);
                Ok(pref * (omega_j * (1.0 - damp * c) - wc * damp * s))
            }
            SpectralModel::Lorentzian { rate, width, .. } => {
                let d = self.center - omega_j;
                let pref = rate * width * width / (d * d + width * width);
                let (s, c) = (d * t).sin_cos();
                Ok(pref * (1.0 + (d / width * s - c) * (-width * t).exp()))
            }
            SpectralModel::Tabulated(_) => Err(Error::UnsupportedClosedForm),
        }
    }

    /// Closed-form `beta_j(t) = \int_0^t gamma_j`.
    pub fn beta_closed(&self, omega_j: f64, t: f64) -> Result<f64> {
        match *self.model {
            SpectralModel::OhmicLorentzDrude { cutoff: wc } => {
                let w = omega_j;
                let norm = w * w + wc * wc;
                let damp = (-wc * t).exp();
                let (s, c) = (w * t).sin_cos();
                let braces = norm * w * t + 2.0 * wc * w * (damp * c - 1.0) - (w * w - wc * wc) * damp * s;
                Ok(4.0 * wc * wc / (norm * norm) * braces)
            }
            SpectralModel::Lorentzian { rate, width, .. } => {
                let d = self.center - omega_j;
                let norm = d * d + width * width;
                let pref = rate * width * width / norm;
                let damp = (-width * t).exp();
                let (s, c) = (d * t).sin_cos();
                // \int_0^t e^{-l u} cos(d u) du and the matching sine integral.
                let int_cos = (width - damp * (width * c - d * s)) / norm;
                let int_sin = (d - damp * (width * s + d * c)) / norm;
                Ok(pref * (t + d / width * int_sin - int_cos))
            }
            SpectralModel::Tabulated(_) => Err(Error::UnsupportedClosedForm),
        }
    }

    /// `gamma_j(t)` from the defining double integral, evaluated without any
    /// family-specific closed form.
    ///
    /// The `tau` integral is done exactly, leaving
    /// `gamma_j(t) = 2 \int J(w') sin((w_j - w') t) / (w_j - w') dw'`. The
    /// frequency integral is split into a core window, integrated with
    /// adaptive Gauss–Kronrod, and two semi-infinite tails integrated lobe
    /// by lobe with epsilon extrapolation.
    pub fn gamma_numeric(&self, omega_j: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let integrand = |w: f64| self.density(w) * sin_ratio(omega_j - w, t);
        let half_period = PI / t;
        let (lo, hi, features) = self.window(omega_j, cfg.freq_window);

        // Align window ends with zeros of the kernel so that every tail lobe
        // has a single sign.
        let lo = omega_j - ((omega_j - lo) / half_period).ceil().max(1.0) * half_period;
        let hi = omega_j + ((hi - omega_j) / half_period).ceil().max(1.0) * half_period;

        let mut points = features;
        let lobes = ((hi - lo) / half_period).round() as usize;
        let budget = cfg.max_subdivisions / 4;
        let stride = lobes.div_ceil(budget.max(1)).max(1);
        let mut k = 0;
        while k <= lobes {
            points.push(lo + k as f64 * half_period);
            k += stride;
        }
        points.push(lo);
        points.push(hi);
        points.retain(|p| *p >= lo && *p <= hi);
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));

        let core = quadrature::integrate(&integrand, &points, 0.5 * cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions)?;
        let mut total = core.value;
        if !matches!(self.model, SpectralModel::Tabulated(_)) {
            let tail_tol = 0.25 * cfg.abs_tol.max(cfg.rel_tol * core.value.abs());
            let upper = quadrature::integrate_oscillatory_tail(
                &integrand,
                hi,
                half_period,
                tail_tol,
                cfg.rel_tol,
                cfg.max_subdivisions,
            )?;
            let lower = quadrature::integrate_oscillatory_tail(
                &integrand,
                lo,
                -half_period,
                tail_tol,
                cfg.rel_tol,
                cfg.max_subdivisions,
            )?;
            total += upper.value + lower.value;
        }
        Ok(2.0 * total)
    }

    /// `beta_j` on a uniform grid from `gamma_numeric` samples, accumulated
    /// with the composite Simpson rule.
    pub fn beta_numeric(&self, omega_j: f64, grid: &TimeGrid, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
        let gammas = grid.times().map(|t| self.gamma_numeric(omega_j, t, cfg)).collect::<Result<Vec<_>>>()?;
        Ok(cumulative_simpson(&gammas, grid.step()))
    }

    /// Integration window `[lo, hi]` and interior feature frequencies.
    fn window(&self, omega_j: f64, multiplier: f64) -> (f64, f64, Vec<f64>) {
        match *self.model {
            SpectralModel::OhmicLorentzDrude { cutoff } => {
                let lo = omega_j.min(0.0) - multiplier * cutoff;
                let hi = omega_j.max(0.0) + multiplier * cutoff;
                (lo, hi, vec![omega_j, 0.0, cutoff, -cutoff])
            }
            SpectralModel::Lorentzian { width, .. } => {
                let lo = omega_j.min(self.center) - multiplier * width;
                let hi = omega_j.max(self.center) + multiplier * width;
                (lo, hi, vec![omega_j, self.center])
            }
            SpectralModel::Tabulated(ref samples) => {
                let lo = samples[0].0;
                let hi = samples[samples.len() - 1].0;
                let mut features: Vec<f64> = samples.iter().map(|s| s.0).collect();
                features.push(omega_j);
                (lo, hi, features)
            }
        }
    }
}

/// `sin(x t) / x`, continuous at `x = 0`.
fn sin_ratio(x: f64, t: f64) -> f64 {
    let xt = x * t;
    if xt.abs() < 1e-6 {
        t * (1.0 - xt * xt / 6.0)
    } else {
        xt.sin() / x
    }
}

fn interpolate(samples: &[(f64, f64)], omega: f64) -> DensityValue {
    let first = samples[0].0;
    let last = samples[samples.len() - 1].0;
    if !(omega >= first && omega <= last) {
        return DensityValue { value: 0.0, out_of_range: true };
    }
    let idx = samples.partition_point(|s| s.0 <= omega).clamp(1, samples.len() - 1);
    let (w0, j0) = samples[idx - 1];
    let (w1, j1) = samples[idx];
    let value = j0 + (j1 - j0) * (omega - w0) / (w1 - w0);
    DensityValue { value, out_of_range: false }
}

/// Running integral of uniformly spaced samples. Even indices use the
/// composite Simpson rule; odd indices add a three-point quadratic panel
/// for the last interval.
pub fn cumulative_simpson(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (y[0] + y[1]);
        return out;
    }
    for k in 1..n {
        out[k] = if k % 2 == 0 {
            out[k - 2] + h / 3.0 * (y[k - 2] + 4.0 * y[k - 1] + y[k])
        } else if k == 1 {
            h / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2])
        } else {
            out[k - 1] + h / 12.0 * (-y[k - 2] + 8.0 * y[k - 1] + 5.0 * y[k])
        };
    }
    out
}
