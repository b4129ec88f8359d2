//! Atom-cavity master equation in the one-excitation dressed basis
//! `(|a0>, |a1->, |a1+>)` with `|a1+-> = (|1g> +- |0e>) / sqrt 2` and
//! `|a0> = |0g>`, integrated with fixed-step RK4. Tracing out the cavity
//! gives an independent route to the atom state.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::dynamics::{
    amplitude_at, atom_state, timelocal_rates, Physicality, QubitState, RateMode, SystemConfig, TimeGrid, C64,
};
use crate::error::{Error, Result};

/// Largest allowed `(omega0 + Omega) * step`.
pub const MAX_PHASE_STEP: f64 = 0.05;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Density matrix of the atom-cavity system in the dressed basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedDensity(pub Matrix3<C64>);

impl DressedDensity {
    pub const HERMITICITY_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const EIGENVALUE_FLOOR: f64 = -1e-6;

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub fn physicality(&self) -> Physicality {
        let m = &self.0;
        let hermiticity = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let trace = (m.trace() - C64::new(1.0, 0.0)).norm();
        let hermitian_part = (m + m.adjoint()) * C64::new(0.5, 0.0);
        let min_eigenvalue = hermitian_part.symmetric_eigenvalues().min();
        Physicality { hermiticity, trace, min_eigenvalue }
    }

    pub fn is_physical(&self) -> bool {
        self.physicality().within(Self::HERMITICITY_TOL, Self::TRACE_TOL, Self::EIGENVALUE_FLOOR)
    }
}

/// Fixed-step RK4 settings: `record_every` steps of size `step` per grid
/// interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    step: f64,
    record_every: usize,
}

impl IntegratorConfig {
    pub fn new(cfg: &SystemConfig, step: f64, record_every: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::param("step", format!("must be > 0, got {step}")));
        }
        if record_every == 0 {
            return Err(Error::param("record_every", "must be >= 1"));
        }
        let phase = (cfg.omega0 + cfg.coupling) * step;
        if phase > MAX_PHASE_STEP * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge(phase));
        }
        Ok(IntegratorConfig { step, record_every })
    }

    /// Largest step with `(omega0 + Omega) * step <= phase_step` that
    /// divides the grid spacing evenly.
    pub fn for_grid(cfg: &SystemConfig, grid: &TimeGrid, phase_step: f64) -> Result<Self> {
        let dt = grid.step();
        let record_every = ((cfg.omega0 + cfg.coupling) * dt / phase_step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Self::new(cfg, dt / record_every as f64, record_every)
    }

    /// Same grid alignment with half the step.
    pub fn halved(&self) -> Self {
        IntegratorConfig { step: 0.5 * self.step, record_every: 2 * self.record_every }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn record_every(&self) -> usize {
        self.record_every
    }
}

/// Dressed-basis image of the initial product state
/// `(cos(theta/2)|e> + e^{i phi} sin(theta/2)|g>) (x) |0>`.
pub fn initial_dressed(cfg: &SystemConfig) -> DressedDensity {
    let (s, c) = (0.5 * cfg.theta).sin_cos();
    let psi =
        Vector3::new(C64::from_polar(s, cfg.phi), C64::new(-c * FRAC_1_SQRT_2, 0.0), C64::new(c * FRAC_1_SQRT_2, 0.0));
    DressedDensity(psi * psi.adjoint())
}

/// Dressed energies `(-w0/2, w0/2 - W, w0/2 + W)`.
pub fn dressed_energies(cfg: &SystemConfig) -> [f64; 3] {
    let half = 0.5 * cfg.omega0;
    [-half, half - cfg.coupling, half + cfg.coupling]
}

fn lowering(level: usize) -> Matrix3<C64> {
    let mut b = Matrix3::zeros();
    b[(0, level)] = C64::new(1.0, 0.0);
    b
}

/// Right-hand side for given energies and instantaneous rates
/// `(gamma_1, gamma_2)`.
pub fn generator(energies: [f64; 3], rates: [f64; 2], rho: &Matrix3<C64>) -> Matrix3<C64> {
    let h = Matrix3::from_diagonal(&Vector3::new(
        C64::new(energies[0], 0.0),
        C64::new(energies[1], 0.0),
        C64::new(energies[2], 0.0),
    ));
    let mut out = (h * rho - rho * h) * C64::new(0.0, -1.0);
    for (j, &gamma) in rates.iter().enumerate() {
        let b = lowering(j + 1);
        let bd = b.adjoint();
        let n = bd * b;
        let dissipator = b * rho * bd - (n * rho + rho * n) * C64::new(0.5, 0.0);
        out += dissipator * C64::new(0.5 * gamma, 0.0);
    }
    out
}

fn instantaneous_rates(cfg: &SystemConfig, t: f64, mode: &RateMode) -> Result<[f64; 2]> {
    match mode {
        RateMode::Closed => {
            let res = cfg.reservoir();
            let [w1, w2] = cfg.transitions();
            Ok([res.gamma_closed(w1, t)?, res.gamma_closed(w2, t)?])
        }
        RateMode::Disabled => Ok([0.0; 2]),
        RateMode::Numeric(q) => {
            let res = cfg.reservoir();
            let [w1, w2] = cfg.transitions();
            Ok([res.gamma_numeric(w1, t, q)?, res.gamma_numeric(w2, t, q)?])
        }
    }
}

/// Time derivative of `rho3` at time `t` with closed-form rates.
pub fn generator_apply(cfg: &SystemConfig, t: f64, rho3: &DressedDensity) -> Result<Matrix3<C64>> {
    let rates = instantaneous_rates(cfg, t, &RateMode::Closed)?;
    Ok(generator(dressed_energies(cfg), rates, &rho3.0))
}

/// RK4 trajectory sampled on `grid`.
pub fn evolve(
    cfg: &SystemConfig,
    grid: &TimeGrid,
    icfg: &IntegratorConfig,
    mode: &RateMode,
) -> Result<Vec<DressedDensity>> {
    cfg.validate()?;
    let dt = grid.step();
    let span = icfg.step * icfg.record_every as f64;
    if ((span - dt) / dt).abs() > 1e-9 {
        return Err(Error::param(
            "record_every",
            format!("step * record_every = {span} does not match the grid spacing {dt}"),
        ));
    }
    let energies = dressed_energies(cfg);
    let h = icfg.step;
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);

    let mut rho = initial_dressed(cfg).0;
    let mut out = Vec::with_capacity(grid.len());
    out.push(DressedDensity(rho));
    for k in 0..grid.n_steps() {
        let t0 = grid.time(k);
        for s in 0..icfg.record_every {
            let t = t0 + s as f64 * h;
            let r0 = instantaneous_rates(cfg, t, mode)?;
            let rm = instantaneous_rates(cfg, t + 0.5 * h, mode)?;
            let r1 = instantaneous_rates(cfg, t + h, mode)?;
            let k1 = generator(energies, r0, &rho);
            let k2 = generator(energies, rm, &(rho + k1 * half));
            let k3 = generator(energies, rm, &(rho + k2 * half));
            let k4 = generator(energies, r1, &(rho + k3 * full));
            rho += (k1 + k2 * two + k3 * two + k4) * sixth;
        }
        out.push(DressedDensity(rho));
    }
    Ok(out)
}

/// Reduced atom state: `rho_ee = <0e|r|0e>`, `rho_eg = <0e|r|0g>`,
/// `rho_gg = <0g|r|0g> + <1g|r|1g>`.
pub fn partial_trace_cavity(rho3: &DressedDensity) -> QubitState {
    let m = &rho3.0;
    let zero_e = Vector3::new(C64::new(0.0, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0));
    let one_g = Vector3::new(C64::new(0.0, 0.0), C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0));
    let zero_g = Vector3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let elem = |a: &Vector3<C64>, b: &Vector3<C64>| (a.adjoint() * m * b)[(0, 0)];
    let ee = elem(&zero_e, &zero_e);
    let eg = elem(&zero_e, &zero_g);
    let ge = elem(&zero_g, &zero_e);
    let gg = elem(&zero_g, &zero_g) + elem(&one_g, &one_g);
    QubitState(Matrix2::new(ee, eg, ge, gg))
}

/// Right side of the time-local atom equation
/// `-(i/2) S [P_e, rho] + Gamma (s- rho s+ - {P_e, rho} / 2)`.
pub fn timelocal_generator(lamb_shift: f64, decoherence: f64, rho: &Matrix2<C64>) -> Matrix2<C64> {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let pe = Matrix2::new(one, zero, zero, zero);
    let lower = Matrix2::new(zero, zero, one, zero);
    let raise = lower.adjoint();
    let unitary = (pe * rho - rho * pe) * C64::new(0.0, -0.5 * lamb_shift);
    let dissipative = (lower * rho * raise - (pe * rho + rho * pe) * C64::new(0.5, 0.0)) * C64::new(decoherence, 0.0);
    unitary + dissipative
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualSample {
    pub t: f64,
    /// Frobenius norm of `d rho/dt - L rho`; `None` at the grid ends and at
    /// flagged zeros of `p`.
    pub residual: Option<f64>,
}

/// Checks that the analytic atom state satisfies the time-local equation.
/// The derivative is a central difference with the grid spacing as step
/// (five-point, shifted forward next to `t = 0`).
pub fn timelocal_residual(cfg: &SystemConfig, grid: &TimeGrid, mode: &RateMode) -> Result<Vec<ResidualSample>> {
    cfg.validate()?;
    let h = grid.step();
    let rho_at = |t: f64| -> Result<Matrix2<C64>> {
        let (p, _) = amplitude_at(cfg, t, mode)?;
        Ok(atom_state(cfg, p)?.0)
    };
    let last = grid.n_steps();
    let mut out = Vec::with_capacity(grid.len());
    for k in 0..=last {
        let t = grid.time(k);
        if k == 0 || k == last {
            out.push(ResidualSample { t, residual: None });
            continue;
        }
        let (p, p_dot) = amplitude_at(cfg, t, mode)?;
        let rates = timelocal_rates(p, p_dot);
        if rates.singular {
            out.push(ResidualSample { t, residual: None });
            continue;
        }
        let derivative = if k >= 2 {
            (rho_at(t - 2.0 * h)? - rho_at(t + 2.0 * h)? + (rho_at(t + h)? - rho_at(t - h)?) * C64::new(8.0, 0.0))
                / C64::new(12.0 * h, 0.0)
        } else {
            // Shifted five-point stencil on t - h .. t + 3h.
            (rho_at(t - h)? * C64::new(-3.0, 0.0) - rho_at(t)? * C64::new(10.0, 0.0)
                + rho_at(t + h)? * C64::new(18.0, 0.0)
                - rho_at(t + 2.0 * h)? * C64::new(6.0, 0.0)
                + rho_at(t + 3.0 * h)?)
                / C64::new(12.0 * h, 0.0)
        };
        let rho = atom_state(cfg, p)?.0;
        let rhs = timelocal_generator(rates.lamb_shift, rates.decoherence, &rho);
        out.push(ResidualSample { t, residual: Some((derivative - rhs).norm()) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralModel;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cfg(coupling: f64, theta: f64) -> SystemConfig {
        SystemConfig::new(1.0, coupling, SpectralModel::ohmic(3.0)).with_angles(theta, 0.0)
    }

    fn max_abs(m: &Matrix3<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn initial_states() {
        let ground = initial_dressed(&cfg(0.5, PI));
        assert!((ground.0[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(
            max_abs(
                &(ground.0
                    - Matrix3::from_diagonal(&Vector3::new(
                        C64::new(1.0, 0.0),
                        C64::new(0.0, 0.0),
                        C64::new(0.0, 0.0)
                    )))
            ) < 1e-15
        );

        let excited = initial_dressed(&cfg(0.5, 0.0)).0;
        assert!((excited[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!((excited[(2, 2)].re - 0.5).abs() < 1e-15);
        assert!((excited[(1, 2)].re + 0.5).abs() < 1e-15);
        assert_eq!(excited[(0, 0)].re, 0.0);

        let eq = initial_dressed(&cfg(0.5, FRAC_PI_2)).0;
        let pops = [eq[(0, 0)].re, eq[(1, 1)].re, eq[(2, 2)].re];
        for (a, b) in pops.iter().zip([0.5, 0.25, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn stationary_states() {
        let c = cfg(0.5, 1.0);
        let ground = DressedDensity(Matrix3::from_diagonal(&Vector3::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        )));
        assert!(max_abs(&generator_apply(&c, 2.0, &ground).unwrap()) < 1e-15);
        let mut plus = Matrix3::zeros();
        plus[(2, 2)] = C64::new(1.0, 0.0);
        assert!(max_abs(&generator(dressed_energies(&c), [0.0, 0.0], &plus)) < 1e-15);
    }

    #[test]
    fn coherence_decays_at_quarter_rate() {
        let c = cfg(0.3, 1.0);
        let mut unit = Matrix3::zeros();
        unit[(1, 0)] = C64::new(1.0, 0.0);
        let (g1, g2) = (0.8, 1.7);
        let d = generator(dressed_energies(&c), [g1, g2], &unit);
        let w1 = c.transitions()[0];
        assert!((d[(1, 0)] - C64::new(-g1 / 4.0, -w1)).norm() < 1e-15);
        let mut rest = d;
        rest[(1, 0)] = C64::new(0.0, 0.0);
        assert!(max_abs(&rest) < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let ground = DressedDensity(Matrix3::from_diagonal(&Vector3::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        )));
        let q = partial_trace_cavity(&ground);
        assert_eq!(q.0[(1, 1)].re, 1.0);
        assert_eq!(q.0[(0, 0)].re, 0.0);
        let mut plus = Matrix3::zeros();
        plus[(2, 2)] = C64::new(1.0, 0.0);
        let q = partial_trace_cavity(&DressedDensity(plus));
        assert!((q.0[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((q.0[(1, 1)].re - 0.5).abs() < 1e-15);
        assert_eq!(q.coherence().norm(), 0.0);
    }

    #[test]
    fn step_constraint() {
        let c = cfg(1.0, 1.0);
        assert!(matches!(IntegratorConfig::new(&c, 0.03, 1), Err(Error::StepTooLarge(_))));
        assert!(IntegratorConfig::new(&c, 0.025, 1).is_ok());
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let icfg = IntegratorConfig::for_grid(&c, &grid, 0.01).unwrap();
        assert_eq!(icfg.record_every(), 20);
        assert!((icfg.step() - 0.005).abs() < 1e-15);
        let bad = IntegratorConfig::new(&c, 0.004, 20).unwrap();
        assert!(evolve(&c, &grid, &bad, &RateMode::Closed).is_err());
    }

    #[test]
    fn lossless_trajectory_is_vacuum_rabi() {
        let theta = 1.2;
        let c = cfg(0.4, theta);
        let grid = TimeGrid::new(10.0, 50).unwrap();
        let icfg = IntegratorConfig::for_grid(&c, &grid, 0.01).unwrap();
        let traj = evolve(&c, &grid, &icfg, &RateMode::Disabled).unwrap();
        assert_eq!(traj[0], initial_dressed(&c));
        for (t, rho3) in grid.times().zip(&traj) {
            let q = partial_trace_cavity(rho3);
            let expected = (0.5 * theta).cos().powi(2) * (0.4 * t).cos().powi(2);
            assert!((q.excited_population() - expected).abs() < 1e-9);
            assert!((rho3.0.trace().re - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn timelocal_residual_lossless() {
        let c = cfg(0.4, FRAC_PI_2);
        let grid = TimeGrid::new(3.0, 3000).unwrap();
        let res = timelocal_residual(&c, &grid, &RateMode::Disabled).unwrap();
        assert!(res[0].residual.is_none() && res[3000].residual.is_none());
        let worst = res.iter().filter_map(|r| r.residual).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }
}
