//! Cross-check suites: each compares two independent routes to the same
//! quantity and reports the worst deviation against a tolerance.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;

use crate::dynamics::{
    amplitude, amplitude_at, atom_state, state_from_amplitude, timelocal_rates, QubitState, RateMode, SystemConfig,
    TimeGrid, C64,
};
use crate::error::{Error, Result};
use crate::mesolve::{evolve, partial_trace_cavity, timelocal_residual, DressedDensity, IntegratorConfig};
use crate::metrics::{metric_sample, qfi_closed, qfi_general_2x2};
use crate::scenario::{evaluate_column, resolve, ContourSpec, CurveSpec, Job, Overrides, Preset, Quantity};
use crate::spectral::{QuadratureConfig, SpectralModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    QfiCoherence,
    GammaOracle,
    BetaConsistency,
    MesolveChain,
    Timelocal,
    Asymptotes,
    Positivity,
    QfiOracle,
    Physicality,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::QfiCoherence,
        Suite::GammaOracle,
        Suite::BetaConsistency,
        Suite::MesolveChain,
        Suite::Timelocal,
        Suite::Asymptotes,
        Suite::Positivity,
        Suite::QfiOracle,
        Suite::Physicality,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::QfiCoherence => "qfi-coherence",
            Suite::GammaOracle => "gamma-oracle",
            Suite::BetaConsistency => "beta-consistency",
            Suite::MesolveChain => "mesolve-chain",
            Suite::Timelocal => "timelocal",
            Suite::Asymptotes => "asymptotes",
            Suite::Positivity => "positivity",
            Suite::QfiOracle => "qfi-oracle",
            Suite::Physicality => "physicality",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::param("suite", format!("unknown suite `{s}`")))
    }
}

/// One compared quantity: worst deviation found and the bound it must meet.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub label: String,
    pub achieved: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `achieved <= tolerance`.
    pub fn at_most(label: impl Into<String>, achieved: f64, tolerance: f64) -> Self {
        Check { label: label.into(), achieved, tolerance, passed: achieved <= tolerance }
    }

    /// Passes when `achieved >= bound`.
    pub fn at_least(label: impl Into<String>, achieved: f64, bound: f64) -> Self {
        Check { label: label.into(), achieved, tolerance: bound, passed: achieved >= bound }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Replacement spectral parameters for the oracle suites.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VerifyOptions {
    pub cutoff: Option<f64>,
    pub width: Option<f64>,
    pub quadrature: QuadratureConfig,
}

impl VerifyOptions {
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.cutoff {
            SpectralModel::ohmic(c).validate()?;
        }
        if let Some(w) = self.width {
            SpectralModel::lorentzian(1.0, w).validate()?;
        }
        self.quadrature.validate()
    }

    fn cutoffs(&self, default: &[f64]) -> Vec<f64> {
        self.cutoff.map_or_else(|| default.to_vec(), |c| vec![c])
    }

    fn widths(&self, default: &[f64]) -> Vec<f64> {
        self.width.map_or_else(|| default.to_vec(), |w| vec![w])
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    opts.validate()?;
    let checks = match suite {
        Suite::QfiCoherence => qfi_coherence()?,
        Suite::GammaOracle => gamma_oracle(opts)?,
        Suite::BetaConsistency => beta_consistency(opts)?,
        Suite::MesolveChain => mesolve_chain()?,
        Suite::Timelocal => timelocal()?,
        Suite::Asymptotes => asymptotes()?,
        Suite::Positivity => positivity()?,
        Suite::QfiOracle => qfi_oracle()?,
        Suite::Physicality => physicality()?,
    };
    Ok(SuiteReport { suite, checks })
}

const ANGLES: [f64; 3] = [FRAC_PI_6, FRAC_PI_3, FRAC_PI_2];

fn curve_specs() -> Result<Vec<CurveSpec>> {
    Preset::curves()
        .map(|p| match resolve(p, &Overrides::default())? {
            Job::Curve(c) => Ok(c),
            Job::Contour(_) => unreachable!("curve preset"),
        })
        .collect()
}

fn contour_specs() -> Result<Vec<ContourSpec>> {
    Preset::contours()
        .map(|p| match resolve(p, &Overrides::default())? {
            Job::Contour(c) => Ok(c),
            Job::Curve(_) => unreachable!("contour preset"),
        })
        .collect()
}

/// Every configuration of every preset with its grid.
pub fn preset_configs() -> Result<Vec<(Preset, SystemConfig, TimeGrid)>> {
    let mut out = Vec::new();
    for c in curve_specs()? {
        out.extend(c.column_configs().into_iter().map(|cfg| (c.preset, cfg, c.grid)));
    }
    for c in contour_specs()? {
        out.extend(c.column_configs()?.into_iter().map(|cfg| (c.preset, cfg, c.grid)));
    }
    Ok(out)
}

/// The eight figure 1 and figure 4 curve presets.
fn chain_specs() -> Result<Vec<CurveSpec>> {
    use Preset::*;
    Ok(curve_specs()?
        .into_iter()
        .filter(|c| matches!(c.preset, Fig1a | Fig1b | Fig1c | Fig1d | Fig4a | Fig4b | Fig4c | Fig4d))
        .collect())
}

fn qfi_coherence() -> Result<Vec<Check>> {
    let mut relation: f64 = 0.0;
    let mut identity: f64 = 0.0;
    for (_, cfg, grid) in preset_configs()? {
        let amps = amplitude(&cfg, &grid, &RateMode::Closed)?;
        for (&t, &p) in amps.times.iter().zip(&amps.p) {
            relation = relation.max(metric_sample(t, p, cfg.theta, cfg.phi)?.relation_residual);
            for theta in ANGLES {
                let q = qfi_closed(p, theta)?;
                identity = identity.max((q.phi - q.theta * theta.sin().powi(2)).abs());
            }
        }
    }
    Ok(vec![
        Check::at_most("|C_l1^2 - F_phi| over all presets", relation, 1e-12),
        Check::at_most("|F_phi - F_theta sin^2 theta|, theta in {pi/6, pi/3, pi/2}", identity, 1e-12),
    ])
}

/// Worst relative deviation of quadrature rates from closed forms, with
/// an absolute floor for small rates.
fn gamma_oracle(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let times = [0.5, 2.0, 5.0, 10.0, 20.0];
    let transitions = [0.0, 0.5, 1.0, 1.5, 2.0];
    let mut checks = Vec::new();
    let families = [
        ("ohmic", opts.cutoffs(&[0.3, 0.8, 1.5, 3.0, 5.0]).into_iter().map(SpectralModel::ohmic).collect::<Vec<_>>()),
        (
            "lorentzian",
            opts.widths(&[0.1, 0.5, 1.0, 3.0, 5.0]).into_iter().map(|w| SpectralModel::lorentzian(1.0, w)).collect(),
        ),
    ];
    for (family, models) in families {
        let (mut worst_rel, mut worst_abs): (f64, f64) = (0.0, 0.0);
        for model in &models {
            let reservoir = model.bind(1.0, 1.0);
            for &w in &transitions {
                for &t in &times {
                    let closed = reservoir.gamma_closed(w, t)?;
                    let numeric = reservoir.gamma_numeric(w, t, &opts.quadrature)?;
                    let diff = (numeric - closed).abs();
                    if closed.abs() < 1e-3 {
                        worst_abs = worst_abs.max(diff);
                    } else {
                        worst_rel = worst_rel.max(diff / closed.abs());
                    }
                }
            }
        }
        checks.push(Check::at_most(format!("{family}: relative gamma deviation"), worst_rel, 1e-6));
        checks.push(Check::at_most(format!("{family}: absolute deviation where |gamma| < 1e-3"), worst_abs, 1e-9));
    }
    Ok(checks)
}

fn beta_models(opts: &VerifyOptions) -> Vec<SpectralModel> {
    let mut models: Vec<SpectralModel> = opts.cutoffs(&[3.0, 0.3]).into_iter().map(SpectralModel::ohmic).collect();
    models.extend(opts.widths(&[3.0, 0.1]).into_iter().map(|w| SpectralModel::lorentzian(1.0, w)));
    models
}

fn beta_consistency(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let h = 1e-5;
    let grid = TimeGrid::new(10.0, 1000)?;
    let (mut fd_dev, mut quad_dev): (f64, f64) = (0.0, 0.0);
    for model in beta_models(opts) {
        for coupling in [0.01, 0.5, 1.0] {
            let cfg = SystemConfig::new(1.0, coupling, model.clone());
            let reservoir = cfg.reservoir();
            for w in cfg.transitions() {
                for t in grid.times().skip(1) {
                    let fd = (reservoir.beta_closed(w, t + h)? - reservoir.beta_closed(w, t - h)?) / (2.0 * h);
                    fd_dev = fd_dev.max((fd - reservoir.gamma_closed(w, t)?).abs());
                }
                let numeric = reservoir.beta_numeric(w, &grid, &opts.quadrature)?;
                for (t, b) in grid.times().zip(numeric) {
                    quad_dev = quad_dev.max((b - reservoir.beta_closed(w, t)?).abs());
                }
            }
        }
    }
    Ok(vec![
        Check::at_most("|d beta/dt (central difference) - gamma|", fd_dev, 1e-6),
        Check::at_most("|beta by quadrature - beta closed| on [0, 10]", quad_dev, 1e-5),
    ])
}

/// Grid and RK4 settings with `(omega0 + Omega) * step == phase_step`
/// exactly, `record_every` steps per grid interval, covering at least
/// `[0, t_end]`.
pub fn phase_aligned_grid(
    cfg: &SystemConfig,
    t_end: f64,
    phase_step: f64,
    record_every: usize,
) -> Result<(TimeGrid, IntegratorConfig)> {
    let step = phase_step / (cfg.omega0 + cfg.coupling);
    let span = step * record_every as f64;
    let n = (t_end / span * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    Ok((TimeGrid::new(n as f64 * span, n)?, IntegratorConfig::new(cfg, step, record_every)?))
}

/// Largest elementwise deviation between the partial-traced RK4 state and
/// the analytic atom state.
pub fn chain_deviation(cfg: &SystemConfig, grid: &TimeGrid, icfg: &IntegratorConfig) -> Result<f64> {
    let traj = evolve(cfg, grid, icfg, &RateMode::Closed)?;
    let mut worst: f64 = 0.0;
    for (t, rho3) in grid.times().zip(&traj) {
        let (p, _) = amplitude_at(cfg, t, &RateMode::Closed)?;
        let exact = atom_state(cfg, p)?;
        let reduced = partial_trace_cavity(rho3);
        worst = worst.max((exact.0 - reduced.0).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

/// Deviations below this are roundoff-dominated and carry no convergence
/// information.
pub const CHAIN_FLOOR: f64 = 1e-10;

fn mesolve_chain() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    let mut worst_gain = f64::INFINITY;
    for spec in chain_specs()? {
        for cfg in spec.column_configs() {
            let (grid, icfg) = phase_aligned_grid(&cfg, spec.grid.t_end(), 0.01, 10)?;
            let coarse = chain_deviation(&cfg, &grid, &icfg)?;
            let fine = chain_deviation(&cfg, &grid, &icfg.halved())?;
            worst = worst.max(coarse);
            if fine > CHAIN_FLOOR {
                worst_gain = worst_gain.min(coarse / fine);
            }
        }
    }
    Ok(vec![
        Check::at_most("max |Tr_c rho_RK4 - rho_analytic| at (w0+W) step = 0.01", worst, 1e-6),
        Check::at_least("improvement from halving the step (above the 1e-10 floor)", worst_gain, 8.0),
    ])
}

fn timelocal() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    let mut samples = 0usize;
    let mut configs: Vec<(SystemConfig, f64)> = Vec::new();
    for spec in chain_specs()? {
        configs.extend(spec.column_configs().into_iter().map(|c| (c, spec.grid.t_end())));
    }
    if let Job::Curve(inset) = resolve(Preset::Fig4aInset, &Overrides::default())? {
        configs.extend(inset.column_configs().into_iter().map(|c| (c, inset.grid.t_end())));
    }
    for (cfg, t_end) in configs {
        let (grid, _) = phase_aligned_grid(&cfg, t_end, 0.01, 1)?;
        for s in timelocal_residual(&cfg, &grid, &RateMode::Closed)? {
            if let Some(r) = s.residual {
                worst = worst.max(r);
                samples += 1;
            }
        }
    }
    Ok(vec![Check::at_most(format!("Frobenius residual over {samples} unflagged points"), worst, 1e-5)])
}

fn f_phi_column(cfg: &SystemConfig, t_end: f64, steps: usize) -> Result<(TimeGrid, Vec<f64>)> {
    let grid = TimeGrid::new(t_end, steps)?;
    let col = evaluate_column(cfg, &grid, Quantity::FPhi, &RateMode::Closed)?;
    Ok((grid, col))
}

fn spread(grid: &TimeGrid, col: &[f64], from: f64) -> f64 {
    let window: Vec<f64> = grid.times().zip(col).filter(|(t, _)| *t >= from).map(|(_, v)| *v).collect();
    window.iter().cloned().fold(f64::MIN, f64::max) - window.iter().cloned().fold(f64::MAX, f64::min)
}

fn asymptotes() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let cfg = SystemConfig::new(1.0, 1.0, SpectralModel::ohmic(3.0));
    let (p, _) = amplitude_at(&cfg, 200.0, &RateMode::Closed)?;
    let m = metric_sample(200.0, p, cfg.theta, cfg.phi)?;
    checks.push(Check::at_most("ohmic W=w0: |F_phi(200) - 0.25|", (m.f_phi - 0.25).abs(), 1e-3));
    checks.push(Check::at_most("ohmic W=w0: |C_l1(200) - 0.5|", (m.c_l1 - 0.5).abs(), 1e-3));

    let cfg = SystemConfig::new(1.0, 0.01, SpectralModel::ohmic(3.0));
    let (_, col) = f_phi_column(&cfg, 10.0, 2000)?;
    let rise = col.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
    checks.push(Check::at_most("ohmic W=0.01 w0: largest F_phi increase on [0, 10]", rise, 0.0));
    checks.push(Check::at_most("ohmic W=0.01 w0: F_phi(10)", col[col.len() - 1], 1e-3));

    for (width, coupling, steps) in [(0.1, 1.0, 2000), (3.0, 40.0, 16_000)] {
        let cfg = SystemConfig::new(1.0, coupling, SpectralModel::lorentzian(1.0, width));
        let (grid, col) = f_phi_column(&cfg, 50.0, steps)?;
        checks.push(Check::at_most(
            format!("lorentzian lambda={width} W={coupling}: F_phi spread on Rt in [20, 50]"),
            spread(&grid, &col, 20.0),
            0.05,
        ));
        if coupling == 40.0 {
            // Only the far-detuned branch survives, so |p| -> 1/2 up to a
            // slow decay with prefactor R lambda^2 / (4 Omega^2 + lambda^2).
            let window: Vec<f64> = grid.times().zip(&col).filter(|(t, _)| *t >= 20.0).map(|(_, v)| *v).collect();
            let mean = window.iter().sum::<f64>() / window.len() as f64;
            checks.push(Check::at_most(
                "lorentzian lambda=3 W=40: |mean F_phi - 1/4| on [20, 50]",
                (mean - 0.25).abs(),
                0.02,
            ));
        }
    }
    Ok(checks)
}

fn positivity() -> Result<Vec<Check>> {
    let cases = [
        ("ohmic omega_c=3, W=0.01", SpectralModel::ohmic(3.0), 0.01, 20.0),
        ("ohmic omega_c=3, W=0.5", SpectralModel::ohmic(3.0), 0.5, 20.0),
        ("lorentzian lambda=3, W=0.01", SpectralModel::lorentzian(1.0, 3.0), 0.01, 10.0),
    ];
    let mut checks = Vec::new();
    for (label, model, coupling, t_end) in cases {
        let cfg = SystemConfig::new(1.0, coupling, model);
        let amps = amplitude(&cfg, &TimeGrid::new(t_end, 20_000)?, &RateMode::Closed)?;
        let lowest = amps
            .p
            .iter()
            .zip(&amps.p_dot)
            .map(|(&p, &d)| timelocal_rates(p, d).decoherence)
            .fold(f64::INFINITY, f64::min);
        checks.push(Check::at_least(format!("{label}: min Gamma"), lowest, -1e-9));
    }
    Ok(checks)
}

/// Central-difference derivative of the atom state with respect to `phi`
/// or `theta`.
pub fn state_derivative(p: C64, theta: f64, phi: f64, wrt_phi: bool, h: f64) -> Result<Matrix2<C64>> {
    let (plus, minus) = if wrt_phi {
        (state_from_amplitude(p, theta, phi + h)?, state_from_amplitude(p, theta, phi - h)?)
    } else {
        (state_from_amplitude(p, theta + h, phi)?, state_from_amplitude(p, theta - h, phi)?)
    };
    Ok((plus.0 - minus.0) / C64::new(2.0 * h, 0.0))
}

fn qfi_oracle() -> Result<Vec<Check>> {
    let h = 1e-4;
    let (mut worst_phi, mut worst_theta): (f64, f64) = (0.0, 0.0);
    let mut compared = 0usize;
    for spec in curve_specs()? {
        for cfg in spec.column_configs() {
            let amps = amplitude(&cfg, &spec.grid, &RateMode::Closed)?;
            for &p in amps.p.iter().step_by(10) {
                for theta in ANGLES {
                    let rho = state_from_amplitude(p, theta, cfg.phi)?;
                    if rho.determinant() <= 1e-6 {
                        continue;
                    }
                    let closed = qfi_closed(p, theta)?;
                    let f_phi = qfi_general_2x2(&rho, &state_derivative(p, theta, cfg.phi, true, h)?)?;
                    let f_theta = qfi_general_2x2(&rho, &state_derivative(p, theta, cfg.phi, false, h)?)?;
                    worst_phi = worst_phi.max(((f_phi - closed.phi) / closed.phi).abs());
                    worst_theta = worst_theta.max(((f_theta - closed.theta) / closed.theta).abs());
                    compared += 1;
                }
            }
        }
    }
    Ok(vec![
        Check::at_most(format!("F_phi relative deviation ({compared} states with det > 1e-6)"), worst_phi, 1e-5),
        Check::at_most("F_theta relative deviation", worst_theta, 1e-5),
    ])
}

fn physicality() -> Result<Vec<Check>> {
    let mut qubit_failures = 0usize;
    let mut worst_qubit_eig = f64::INFINITY;
    for (_, cfg, grid) in preset_configs()? {
        let amps = amplitude(&cfg, &grid, &RateMode::Closed)?;
        for &p in &amps.p {
            let rho = atom_state(&cfg, p)?;
            worst_qubit_eig = worst_qubit_eig.min(rho.physicality().min_eigenvalue);
            if !rho.is_physical() {
                qubit_failures += 1;
            }
        }
    }
    let mut dressed_failures = 0usize;
    let mut worst_dressed_eig = f64::INFINITY;
    for spec in chain_specs()? {
        for cfg in spec.column_configs() {
            let icfg = IntegratorConfig::for_grid(&cfg, &spec.grid, 0.01)?;
            for rho3 in evolve(&cfg, &spec.grid, &icfg, &RateMode::Closed)? {
                worst_dressed_eig = worst_dressed_eig.min(rho3.physicality().min_eigenvalue);
                if !rho3.is_physical() {
                    dressed_failures += 1;
                }
            }
        }
    }
    Ok(vec![
        Check::at_most("atom states outside the QubitState tolerances", qubit_failures as f64, 0.0),
        Check::at_least("smallest atom-state eigenvalue", worst_qubit_eig, QubitState::EIGENVALUE_FLOOR),
        Check::at_most("dressed states outside the DressedDensity tolerances", dressed_failures as f64, 0.0),
        Check::at_least("smallest dressed-state eigenvalue", worst_dressed_eig, DressedDensity::EIGENVALUE_FLOOR),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn phase_grid_is_exact() {
        let cfg = SystemConfig::new(1.0, 0.5, SpectralModel::ohmic(3.0));
        let (grid, icfg) = phase_aligned_grid(&cfg, 20.0, 0.01, 10).unwrap();
        assert!(((cfg.omega0 + cfg.coupling) * icfg.step() - 0.01).abs() < 1e-15);
        assert!(grid.t_end() >= 20.0 && grid.t_end() < 20.0 + 10.0 * icfg.step() + 1e-12);
    }

    #[test]
    fn bad_options_are_rejected() {
        let opts = VerifyOptions { cutoff: Some(-1.0), ..Default::default() };
        assert!(run_suite(Suite::GammaOracle, &opts).is_err());
    }
}
