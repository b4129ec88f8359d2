//! Reduced atom dynamics: the excited-state amplitude `p(t)`, the atom
//! density matrix built from it and the coefficients of the time-local
//! generator (Lamb shift and decoherence rate).

use nalgebra::{Complex, Matrix2};

use crate::error::{Error, Result};
use crate::spectral::{QuadratureConfig, Reservoir, SpectralModel};

pub type C64 = Complex<f64>;

/// Threshold on `|p|` below which the time-local coefficients are flagged
/// as singular.
pub const EPS_P: f64 = 1e-10;

/// Slack allowed on `|p| <= 1`.
pub const AMPLITUDE_SLACK: f64 = 1e-9;

/// Atom, cavity and reservoir parameters. The atom and cavity share the
/// frequency `omega0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemConfig {
    pub omega0: f64,
    /// Atom-cavity coupling `Omega`.
    pub coupling: f64,
    /// Polar angle of the initial atom state.
    pub theta: f64,
    /// Azimuth of the initial atom state, the estimated phase.
    pub phi: f64,
    pub spectral: SpectralModel,
}

impl SystemConfig {
    pub fn new(omega0: f64, coupling: f64, spectral: SpectralModel) -> Self {
        SystemConfig { omega0, coupling, theta: std::f64::consts::FRAC_PI_2, phi: 0.0, spectral }
    }

    pub fn with_angles(mut self, theta: f64, phi: f64) -> Self {
        self.theta = theta;
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        use std::f64::consts::PI;
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::param("omega0", format!("must be > 0, got {}", self.omega0)));
        }
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(Error::param("Omega", format!("must be >= 0, got {}", self.coupling)));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::param("theta", format!("must lie in [0, pi], got {}", self.theta)));
        }
        if !(0.0..2.0 * PI).contains(&self.phi) {
            return Err(Error::param("phi", format!("must lie in [0, 2 pi), got {}", self.phi)));
        }
        self.spectral.validate()
    }

    /// Dressed transition frequencies `(omega0 - Omega, omega0 + Omega)`.
    pub fn transitions(&self) -> [f64; 2] {
        [self.omega0 - self.coupling, self.omega0 + self.coupling]
    }

    pub fn reservoir(&self) -> Reservoir<'_> {
        self.spectral.bind(self.omega0, self.coupling)
    }
}

/// Uniform grid `t_k = k * t_end / n_steps`, `k = 0..=n_steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::param("t_end", format!("must be > 0, got {t_end}")));
        }
        if n_steps == 0 {
            return Err(Error::param("n_steps", "must be >= 1"));
        }
        Ok(TimeGrid { t_end, n_steps })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.t_end
        } else {
            k as f64 * self.t_end / self.n_steps as f64
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }
}

/// Where the decay rates come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateMode {
    /// Closed-form `gamma_j`, `beta_j`.
    Closed,
    /// Quadrature of the defining integral plus Simpson accumulation.
    Numeric(QuadratureConfig),
    /// `gamma_j = beta_j = 0`: the lossless vacuum-Rabi limit. Used as a
    /// verification hook.
    Disabled,
}

/// Amplitude and rate samples on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeSeries {
    pub times: Vec<f64>,
    pub p: Vec<C64>,
    pub p_dot: Vec<C64>,
    pub beta: [Vec<f64>; 2],
    pub gamma: [Vec<f64>; 2],
}

impl AmplitudeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `p` and `p_dot` from the rates of both dressed transitions.
pub fn amplitude_from_rates(transitions: [f64; 2], t: f64, beta: [f64; 2], gamma: [f64; 2]) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut p_dot = C64::new(0.0, 0.0);
    for j in 0..2 {
        let term = C64::new(-beta[j] / 4.0, -transitions[j] * t).exp() * 0.5;
        p += term;
        p_dot += C64::new(-gamma[j] / 4.0, -transitions[j]) * term;
    }
    (p, p_dot)
}

/// Closed-form rates `(beta, gamma)` for both transitions at time `t`.
pub fn closed_rates(cfg: &SystemConfig, t: f64) -> Result<([f64; 2], [f64; 2])> {
    let res = cfg.reservoir();
    let [w1, w2] = cfg.transitions();
    Ok(([res.beta_closed(w1, t)?, res.beta_closed(w2, t)?], [res.gamma_closed(w1, t)?, res.gamma_closed(w2, t)?]))
}

/// `(p(t), p_dot(t))` at a single time. Numeric rates need a grid and are
/// rejected here.
pub fn amplitude_at(cfg: &SystemConfig, t: f64, mode: &RateMode) -> Result<(C64, C64)> {
    let (beta, gamma) = match mode {
        RateMode::Closed => closed_rates(cfg, t)?,
        RateMode::Disabled => ([0.0; 2], [0.0; 2]),
        RateMode::Numeric(_) => {
            return Err(Error::param("mode", "numeric rates are accumulated on a time grid; use amplitude"))
        }
    };
    Ok(amplitude_from_rates(cfg.transitions(), t, beta, gamma))
}

/// Amplitude series on `grid`. `p_dot` is always the analytic derivative
/// built from the same `beta_j`, `gamma_j` samples.
pub fn amplitude(cfg: &SystemConfig, grid: &TimeGrid, mode: &RateMode) -> Result<AmplitudeSeries> {
    cfg.validate()?;
    let n = grid.len();
    let times: Vec<f64> = grid.times().collect();
    let transitions = cfg.transitions();
    let mut beta = [vec![0.0; n], vec![0.0; n]];
    let mut gamma = [vec![0.0; n], vec![0.0; n]];
    match mode {
        RateMode::Disabled => {}
        RateMode::Closed => {
            let res = cfg.reservoir();
            for j in 0..2 {
                for (k, &t) in times.iter().enumerate() {
                    beta[j][k] = res.beta_closed(transitions[j], t)?;
                    gamma[j][k] = res.gamma_closed(transitions[j], t)?;
                }
            }
        }
        RateMode::Numeric(qcfg) => {
            qcfg.validate()?;
            let res = cfg.reservoir();
            for j in 0..2 {
                gamma[j] =
                    times.iter().map(|&t| res.gamma_numeric(transitions[j], t, qcfg)).collect::<Result<Vec<_>>>()?;
                beta[j] = crate::spectral::cumulative_simpson(&gamma[j], grid.step());
            }
        }
    }
    let (p, p_dot) = (0..n)
        .map(|k| amplitude_from_rates(transitions, times[k], [beta[0][k], beta[1][k]], [gamma[0][k], gamma[1][k]]))
        .unzip();
    Ok(AmplitudeSeries { times, p, p_dot, beta, gamma })
}

/// Atom density matrix in the ordered basis `{|e>, |g>}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState(pub Matrix2<C64>);

/// Deviation of a density matrix from the physical-state conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Physicality {
    /// Largest `|rho - rho^dagger|` entry.
    pub hermiticity: f64,
    /// `|Tr rho - 1|`.
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn within(&self, herm_tol: f64, trace_tol: f64, eig_floor: f64) -> bool {
        self.hermiticity <= herm_tol && self.trace <= trace_tol && self.min_eigenvalue >= eig_floor
    }
}

impl QubitState {
    pub const HERMITICITY_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;
    pub const EIGENVALUE_FLOOR: f64 = -1e-9;

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn excited_population(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn coherence(&self) -> C64 {
        self.0[(0, 1)]
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
    }

    pub fn physicality(&self) -> Physicality {
        let m = &self.0;
        let hermiticity = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let trace = (m.trace() - C64::new(1.0, 0.0)).norm();
        let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
        let off = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
        let min_eigenvalue = 0.5 * (a + d) - (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt();
        Physicality { hermiticity, trace, min_eigenvalue }
    }

    pub fn is_physical(&self) -> bool {
        self.physicality().within(Self::HERMITICITY_TOL, Self::TRACE_TOL, Self::EIGENVALUE_FLOOR)
    }
}

/// Atom state for amplitude `p`, with the initial-state angles of `cfg`.
pub fn atom_state(cfg: &SystemConfig, p: C64) -> Result<QubitState> {
    state_from_amplitude(p, cfg.theta, cfg.phi)
}

pub fn state_from_amplitude(p: C64, theta: f64, phi: f64) -> Result<QubitState> {
    let mag = p.norm();
    if mag.is_nan() || mag > 1.0 + AMPLITUDE_SLACK {
        return Err(Error::InvalidAmplitude(mag));
    }
    let (s, c) = (0.5 * theta).sin_cos();
    let ee = p.norm_sqr() * c * c;
    let eg = p * C64::from_polar(1.0, -phi) * (s * c);
    Ok(QubitState(Matrix2::new(C64::new(ee, 0.0), eg, eg.conj(), C64::new(1.0 - ee, 0.0))))
}

/// Lamb shift `S` and decoherence rate `Gamma` of the time-local
/// generator. When `|p| <= EPS_P` both are NaN and `singular` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeLocalRates {
    pub lamb_shift: f64,
    pub decoherence: f64,
    pub singular: bool,
}

pub fn timelocal_rates(p: C64, p_dot: C64) -> TimeLocalRates {
    if p.norm() <= EPS_P {
        return TimeLocalRates { lamb_shift: f64::NAN, decoherence: f64::NAN, singular: true };
    }
    let ratio = p_dot / p;
    TimeLocalRates { lamb_shift: -2.0 * ratio.im, decoherence: -2.0 * ratio.re, singular: false }
}

/// `Gamma = -2 Re(p_dot / p)`; NaN at a zero of `p`.
pub fn decoherence_rate(p: C64, p_dot: C64) -> f64 {
    timelocal_rates(p, p_dot).decoherence
}

/// `S = -2 Im(p_dot / p)`; NaN at a zero of `p`.
pub fn lamb_shift(p: C64, p_dot: C64) -> f64 {
    timelocal_rates(p, p_dot).lamb_shift
}
