//! Figure presets, parameter sweeps and their CSV serialization.
//!
//! Ohmic scenarios measure frequencies in units of `omega0`; Lorentzian
//! scenarios in units of the dissipative rate `R`, with `omega0 = R`.
//! Lorentzian observables other than the Lamb shift do not depend on
//! `omega0`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::dynamics::{amplitude, timelocal_rates, RateMode, SystemConfig, TimeGrid};
use crate::error::{Error, Result};
use crate::metrics::metric_sample;
use crate::spectral::{QuadratureConfig, SpectralModel};

pub const CURVE_STEPS: usize = 2000;
pub const CONTOUR_TIME_STEPS: usize = 200;
pub const CONTOUR_PARAM_POINTS: usize = 100;
pub const INSET_STEPS: usize = 16_000;

/// Observable written to a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    FPhi,
    FTheta,
    CoherenceL1,
    Decoherence,
    LambShift,
}

impl Quantity {
    pub fn label(&self) -> &'static str {
        match self {
            Quantity::FPhi => "F_phi",
            Quantity::FTheta => "F_theta",
            Quantity::CoherenceL1 => "C_l1",
            Quantity::Decoherence => "Gamma",
            Quantity::LambShift => "S",
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fphi" | "F_phi" => Ok(Quantity::FPhi),
            "ftheta" | "F_theta" => Ok(Quantity::FTheta),
            "cl1" | "C_l1" | "coherence" => Ok(Quantity::CoherenceL1),
            "gamma" | "Gamma" | "decoherence" => Ok(Quantity::Decoherence),
            "lamb" | "S" | "lamb-shift" => Ok(Quantity::LambShift),
            other => Err(Error::param("quantity", format!("unknown quantity `{other}`"))),
        }
    }
}

/// Swept parameter of a contour or sweep table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Coupling,
    Cutoff,
    Width,
    Theta,
    Phi,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Coupling => "omega",
            SweepParam::Cutoff => "omega_c",
            SweepParam::Width => "lambda",
            SweepParam::Theta => "theta",
            SweepParam::Phi => "phi",
        }
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(&self, base: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let mut cfg = base.clone();
        match (self, &mut cfg.spectral) {
            (SweepParam::Coupling, _) => cfg.coupling = value,
            (SweepParam::Theta, _) => cfg.theta = value,
            (SweepParam::Phi, _) => cfg.phi = value,
            (SweepParam::Cutoff, SpectralModel::OhmicLorentzDrude { cutoff }) => *cutoff = value,
            (SweepParam::Width, SpectralModel::Lorentzian { width, .. }) => *width = value,
            (p, _) => {
                return Err(Error::param("param", format!("`{}` does not apply to this spectral model", p.name())))
            }
        }
        Ok(cfg)
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" | "Omega" | "coupling" => Ok(SweepParam::Coupling),
            "omega_c" | "cutoff" => Ok(SweepParam::Cutoff),
            "lambda" | "width" => Ok(SweepParam::Width),
            "theta" => Ok(SweepParam::Theta),
            "phi" => Ok(SweepParam::Phi),
            other => Err(Error::param("param", format!("unknown sweep parameter `{other}`"))),
        }
    }
}

/// Figure presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4aInset,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig5a,
    Fig5b,
    Fig6a,
    Fig6b,
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 18] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig1c,
        Preset::Fig1d,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4aInset,
        Preset::Fig4b,
        Preset::Fig4c,
        Preset::Fig4d,
        Preset::Fig5a,
        Preset::Fig5b,
        Preset::Fig6a,
        Preset::Fig6b,
        Preset::Custom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig1c => "fig1c",
            Preset::Fig1d => "fig1d",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4aInset => "fig4a-inset",
            Preset::Fig4b => "fig4b",
            Preset::Fig4c => "fig4c",
            Preset::Fig4d => "fig4d",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig6a => "fig6a",
            Preset::Fig6b => "fig6b",
            Preset::Custom => "custom",
        }
    }

    pub fn is_contour(&self) -> bool {
        matches!(self, Preset::Fig2a | Preset::Fig2b | Preset::Fig5a | Preset::Fig5b)
    }

    /// Curve presets other than `custom`.
    pub fn curves() -> impl Iterator<Item = Preset> {
        Self::ALL.into_iter().filter(|p| !p.is_contour() && *p != Preset::Custom)
    }

    pub fn contours() -> impl Iterator<Item = Preset> {
        Self::ALL.into_iter().filter(|p| p.is_contour())
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::param("preset", format!("unknown preset `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Ohmic,
    Lorentzian,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ohmic" => Ok(ModelKind::Ohmic),
            "lorentzian" => Ok(ModelKind::Lorentzian),
            other => Err(Error::param("model", format!("unknown model `{other}` (ohmic|lorentzian)"))),
        }
    }
}

/// Optional replacements for preset parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub steps: Option<usize>,
    pub t_end: Option<f64>,
    pub numeric: bool,
    pub quadrature: Option<QuadratureConfig>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub omega0: Option<f64>,
    pub cutoff: Option<f64>,
    pub width: Option<f64>,
    pub rate: Option<f64>,
    pub detuning: Option<f64>,
    pub couplings: Option<Vec<f64>>,
    /// Only for `custom`.
    pub model: Option<ModelKind>,
    /// Only for `custom`.
    pub quantity: Option<Quantity>,
}

impl Overrides {
    fn rate_mode(&self) -> RateMode {
        if self.numeric {
            RateMode::Numeric(self.quadrature.unwrap_or_default())
        } else {
            RateMode::Closed
        }
    }

    fn apply_model(&self, model: &mut SpectralModel) {
        match model {
            SpectralModel::OhmicLorentzDrude { cutoff } => {
                if let Some(c) = self.cutoff {
                    *cutoff = c;
                }
            }
            SpectralModel::Lorentzian { rate, width, detuning } => {
                if let Some(w) = self.width {
                    *width = w;
                }
                if let Some(r) = self.rate {
                    *rate = r;
                }
                if self.detuning.is_some() {
                    *detuning = self.detuning;
                }
            }
            SpectralModel::Tabulated(_) => {}
        }
    }
}

/// Several couplings on one time grid: one column per coupling.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub preset: Preset,
    pub base: SystemConfig,
    pub couplings: Vec<f64>,
    pub quantity: Quantity,
    pub grid: TimeGrid,
    pub mode: RateMode,
}

/// One quantity over a (time, parameter) grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourSpec {
    pub preset: Preset,
    pub base: SystemConfig,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub quantity: Quantity,
    pub grid: TimeGrid,
    pub mode: RateMode,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Curve(CurveSpec),
    Contour(ContourSpec),
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect(),
    }
}

const FIG_COUPLINGS: [f64; 3] = [0.01, 0.5, 1.0];

fn ohmic_base(cutoff: f64, coupling: f64) -> SystemConfig {
    SystemConfig::new(1.0, coupling, SpectralModel::ohmic(cutoff)).with_angles(FRAC_PI_2, 0.0)
}

fn lorentzian_base(width: f64, coupling: f64) -> SystemConfig {
    SystemConfig::new(1.0, coupling, SpectralModel::lorentzian(1.0, width)).with_angles(FRAC_PI_2, 0.0)
}

/// Preset parameters before overrides.
fn preset_job(preset: Preset, ov: &Overrides) -> Result<Job> {
    use Preset::*;
    let curve = |base: SystemConfig, couplings: &[f64], quantity: Quantity, t_end: f64, steps: usize| {
        Ok(Job::Curve(CurveSpec {
            preset,
            base,
            couplings: couplings.to_vec(),
            quantity,
            grid: TimeGrid::new(t_end, steps)?,
            mode: RateMode::Closed,
        }))
    };
    let contour = |base: SystemConfig, param: SweepParam, values: Vec<f64>, t_end: f64| {
        Ok(Job::Contour(ContourSpec {
            preset,
            base,
            param,
            values,
            quantity: Quantity::FPhi,
            grid: TimeGrid::new(t_end, CONTOUR_TIME_STEPS)?,
            mode: RateMode::Closed,
        }))
    };
    let n = CONTOUR_PARAM_POINTS;
    match preset {
        Fig1a => curve(ohmic_base(3.0, 1.0), &FIG_COUPLINGS, Quantity::FPhi, 20.0, CURVE_STEPS),
        Fig1b => curve(ohmic_base(0.3, 1.0), &FIG_COUPLINGS, Quantity::FPhi, 20.0, CURVE_STEPS),
        Fig1c => curve(ohmic_base(3.0, 1.0), &FIG_COUPLINGS, Quantity::CoherenceL1, 20.0, CURVE_STEPS),
        Fig1d => curve(ohmic_base(0.3, 1.0), &FIG_COUPLINGS, Quantity::CoherenceL1, 20.0, CURVE_STEPS),
        Fig3a => curve(ohmic_base(3.0, 1.0), &FIG_COUPLINGS, Quantity::Decoherence, 20.0, CURVE_STEPS),
        Fig3b => curve(ohmic_base(0.3, 1.0), &FIG_COUPLINGS, Quantity::Decoherence, 20.0, CURVE_STEPS),
        Fig4a => curve(lorentzian_base(3.0, 1.0), &FIG_COUPLINGS, Quantity::FPhi, 50.0, CURVE_STEPS),
        Fig4aInset => curve(lorentzian_base(3.0, 40.0), &[40.0], Quantity::FPhi, 50.0, INSET_STEPS),
        Fig4b => curve(lorentzian_base(0.1, 1.0), &FIG_COUPLINGS, Quantity::FPhi, 50.0, CURVE_STEPS),
        Fig4c => curve(lorentzian_base(3.0, 1.0), &FIG_COUPLINGS, Quantity::CoherenceL1, 50.0, CURVE_STEPS),
        Fig4d => curve(lorentzian_base(0.1, 1.0), &FIG_COUPLINGS, Quantity::CoherenceL1, 50.0, CURVE_STEPS),
        Fig6a => curve(lorentzian_base(3.0, 1.0), &FIG_COUPLINGS, Quantity::Decoherence, 20.0, CURVE_STEPS),
        Fig6b => curve(lorentzian_base(0.1, 1.0), &FIG_COUPLINGS, Quantity::Decoherence, 20.0, CURVE_STEPS),
        Fig2a => contour(ohmic_base(3.0, 1.0), SweepParam::Coupling, linspace(0.0, 1.0, n), 20.0),
        Fig2b => contour(ohmic_base(3.0, 1.0), SweepParam::Cutoff, linspace(0.03, 3.0, n), 20.0),
        Fig5a => contour(lorentzian_base(0.1, 1.0), SweepParam::Coupling, linspace(0.0, 1.0, n), 50.0),
        Fig5b => contour(lorentzian_base(3.0, 1.0), SweepParam::Width, linspace(0.03, 3.0, n), 50.0),
        Custom => {
            let base = match ov.model {
                Some(ModelKind::Ohmic) => ohmic_base(3.0, 1.0),
                Some(ModelKind::Lorentzian) => lorentzian_base(3.0, 1.0),
                None => return Err(Error::param("model", "the custom preset needs --model ohmic|lorentzian")),
            };
            curve(base, &FIG_COUPLINGS, ov.quantity.unwrap_or(Quantity::FPhi), 20.0, CURVE_STEPS)
        }
    }
}

/// Preset with overrides applied and every parameter validated.
pub fn resolve(preset: Preset, ov: &Overrides) -> Result<Job> {
    if preset != Preset::Custom && (ov.model.is_some() || ov.quantity.is_some()) {
        return Err(Error::param("model", "--model/--quantity only apply to the custom preset"));
    }
    let mut job = preset_job(preset, ov)?;
    match &mut job {
        Job::Curve(c) => {
            if let Some(cs) = &ov.couplings {
                if cs.is_empty() {
                    return Err(Error::param("omegas", "need at least one coupling"));
                }
                c.couplings = cs.clone();
            }
            apply_common(&mut c.base, &mut c.grid, &mut c.mode, ov)?;
            for &w in &c.couplings {
                SystemConfig { coupling: w, ..c.base.clone() }.validate()?;
            }
        }
        Job::Contour(c) => {
            apply_common(&mut c.base, &mut c.grid, &mut c.mode, ov)?;
            validate_contour(c)?;
        }
    }
    Ok(job)
}

/// Free sweep of `param` over `values` for one spectral family. Defaults:
/// `omega_c = 3` or `R = 1, lambda = 3`, `Omega = 1`, 200 steps over
/// `[0, 20]`. A single entry in `ov.couplings` sets `Omega`.
pub fn sweep(
    model: ModelKind,
    param: SweepParam,
    values: Vec<f64>,
    quantity: Quantity,
    ov: &Overrides,
) -> Result<ContourSpec> {
    if values.is_empty() {
        return Err(Error::param("range", "need at least one value"));
    }
    let mut base = match model {
        ModelKind::Ohmic => ohmic_base(3.0, 1.0),
        ModelKind::Lorentzian => lorentzian_base(3.0, 1.0),
    };
    match ov.couplings.as_deref() {
        None => {}
        Some([w]) => base.coupling = *w,
        Some(_) => return Err(Error::param("omegas", "a sweep takes a single coupling")),
    }
    let mut spec = ContourSpec {
        preset: Preset::Custom,
        base,
        param,
        values,
        quantity,
        grid: TimeGrid::new(20.0, CONTOUR_TIME_STEPS)?,
        mode: RateMode::Closed,
    };
    apply_common(&mut spec.base, &mut spec.grid, &mut spec.mode, ov)?;
    validate_contour(&spec)?;
    Ok(spec)
}

fn apply_common(base: &mut SystemConfig, grid: &mut TimeGrid, mode: &mut RateMode, ov: &Overrides) -> Result<()> {
    if let Some(t) = ov.theta {
        base.theta = t;
    }
    if let Some(p) = ov.phi {
        base.phi = p;
    }
    if let Some(w) = ov.omega0 {
        base.omega0 = w;
    }
    ov.apply_model(&mut base.spectral);
    *grid = TimeGrid::new(ov.t_end.unwrap_or(grid.t_end()), ov.steps.unwrap_or(grid.n_steps()))?;
    *mode = ov.rate_mode();
    if let RateMode::Numeric(q) = mode {
        q.validate()?;
    }
    Ok(())
}

fn validate_contour(c: &ContourSpec) -> Result<()> {
    for &v in &c.values {
        c.param.apply(&c.base, v)?.validate()?;
    }
    Ok(())
}

/// Samples of `quantity` for one configuration on `grid`. Singular
/// decoherence/Lamb-shift samples are NaN.
pub fn evaluate_column(cfg: &SystemConfig, grid: &TimeGrid, quantity: Quantity, mode: &RateMode) -> Result<Vec<f64>> {
    let amps = amplitude(cfg, grid, mode)?;
    amps.times
        .iter()
        .zip(amps.p.iter().zip(&amps.p_dot))
        .map(|(&t, (&p, &p_dot))| {
            Ok(match quantity {
                Quantity::Decoherence => timelocal_rates(p, p_dot).decoherence,
                Quantity::LambShift => timelocal_rates(p, p_dot).lamb_shift,
                q => {
                    let m = metric_sample(t, p, cfg.theta, cfg.phi)?;
                    match q {
                        Quantity::FPhi => m.f_phi,
                        Quantity::FTheta => m.f_theta,
                        _ => m.c_l1,
                    }
                }
            })
        })
        .collect()
}

impl CurveSpec {
    /// One configuration per output column.
    pub fn column_configs(&self) -> Vec<SystemConfig> {
        self.couplings.iter().map(|&w| SystemConfig { coupling: w, ..self.base.clone() }).collect()
    }

    pub fn column_names(&self) -> Vec<String> {
        self.couplings.iter().map(|w| format!("value_omega_{w:?}")).collect()
    }

    pub fn evaluate(&self) -> Result<Vec<Vec<f64>>> {
        self.column_configs().iter().map(|cfg| evaluate_column(cfg, &self.grid, self.quantity, &self.mode)).collect()
    }

    pub fn metadata(&self, build: &str) -> Vec<String> {
        let mut meta = vec![format!("preset: {}", self.preset), format!("quantity: {}", self.quantity.label())];
        meta.extend(system_echo(&self.base));
        let couplings: Vec<String> = self.couplings.iter().map(|w| format!("{w}")).collect();
        meta.push(format!("Omega: {}", couplings.join(", ")));
        meta.extend(grid_echo(&self.base, &self.grid, &self.mode));
        meta.push(format!("build: {build}"));
        meta
    }

    /// CSV with `#` metadata, a `t,value_omega_...` header and one row per
    /// grid time.
    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W, columns: &[Vec<f64>], build: &str) -> std::io::Result<()> {
        for line in self.metadata(build) {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "t,{}", self.column_names().join(","))?;
        for (k, t) in self.grid.times().enumerate() {
            write!(out, "{}", format_sig(t))?;
            for col in columns {
                write!(out, ",{}", format_sig(col[k]))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

impl ContourSpec {
    pub fn column_configs(&self) -> Result<Vec<SystemConfig>> {
        self.values.iter().map(|&v| self.param.apply(&self.base, v)).collect()
    }

    pub fn evaluate(&self) -> Result<Vec<Vec<f64>>> {
        self.column_configs()?.iter().map(|cfg| evaluate_column(cfg, &self.grid, self.quantity, &self.mode)).collect()
    }

    pub fn metadata(&self, build: &str) -> Vec<String> {
        let mut meta = vec![format!("preset: {}", self.preset), format!("quantity: {}", self.quantity.label())];
        meta.extend(system_echo(&self.base));
        let first = self.values.first().copied().unwrap_or(f64::NAN);
        let last = self.values.last().copied().unwrap_or(f64::NAN);
        meta.push(format!("param: {} in [{first}, {last}], {} values", self.param.name(), self.values.len()));
        meta.extend(grid_echo(&self.base, &self.grid, &self.mode));
        meta.push(format!("build: {build}"));
        meta
    }

    /// Long-format CSV `t,param,value`, parameter-major.
    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W, columns: &[Vec<f64>], build: &str) -> std::io::Result<()> {
        for line in self.metadata(build) {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "t,param,value")?;
        for (v, col) in self.values.iter().zip(columns) {
            for (t, x) in self.grid.times().zip(col) {
                writeln!(out, "{},{},{}", format_sig(t), format_sig(*v), format_sig(*x))?;
            }
        }
        Ok(())
    }
}

fn system_echo(cfg: &SystemConfig) -> Vec<String> {
    let model = match &cfg.spectral {
        SpectralModel::OhmicLorentzDrude { cutoff } => format!("model: ohmic omega_c={cutoff}"),
        SpectralModel::Lorentzian { rate, width, detuning } => match detuning {
            Some(d) => format!("model: lorentzian R={rate} lambda={width} detuning={d}"),
            None => format!("model: lorentzian R={rate} lambda={width} detuning=Omega"),
        },
        SpectralModel::Tabulated(s) => format!("model: tabulated ({} samples)", s.len()),
    };
    vec![model, format!("omega0={} theta={} phi={}", cfg.omega0, cfg.theta, cfg.phi)]
}

fn grid_echo(cfg: &SystemConfig, grid: &TimeGrid, mode: &RateMode) -> Vec<String> {
    let unit = match cfg.spectral {
        SpectralModel::Lorentzian { .. } => "R t",
        _ => "omega0 t",
    };
    let rates = match mode {
        RateMode::Closed => "closed".to_string(),
        RateMode::Numeric(q) => format!(
            "numeric window={} abs_tol={:e} rel_tol={:e} max_subdivisions={}",
            q.freq_window, q.abs_tol, q.rel_tol, q.max_subdivisions
        ),
        RateMode::Disabled => "disabled".to_string(),
    };
    vec![format!("time: {unit} in [0, {}], {} samples", grid.t_end(), grid.len()), format!("rates: {rates}")]
}

/// Decimal representation with 12 significant digits, `%.12g` style:
/// trailing zeros trimmed, exponent form outside `[1e-4, 1e12)`, `nan`
/// for NaN.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Exponent after rounding to the requested precision.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig(-12.5), "-12.5");
        assert_eq!(format_sig(123456.7890123456), "123456.789012");
        assert_eq!(format_sig(1.5e-7), "1.5e-07");
        assert_eq!(format_sig(9.9999999999999e-6), "1e-05");
        assert_eq!(format_sig(1.0981945398e-5), "1.0981945398e-05");
        assert_eq!(format_sig(0.000123), "0.000123");
        assert_eq!(format_sig(2.5e13), "2.5e+13");
        assert_eq!(format_sig(f64::NAN), "nan");
        assert_eq!(format_sig(0.99999999999999), "1");
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fig7a".parse::<Preset>().is_err());
        assert_eq!(Preset::curves().count(), 13);
        assert_eq!(Preset::contours().count(), 4);
    }

    #[test]
    fn column_names_follow_couplings() {
        let Job::Curve(c) = resolve(Preset::Fig1a, &Overrides::default()).unwrap() else { panic!() };
        assert_eq!(c.column_names(), ["value_omega_0.01", "value_omega_0.5", "value_omega_1.0"]);
        assert_eq!(c.grid.len(), CURVE_STEPS + 1);
    }

    #[test]
    fn overrides_are_validated() {
        let bad = Overrides { cutoff: Some(-3.0), ..Default::default() };
        assert!(resolve(Preset::Fig1a, &bad).is_err());
        let bad = Overrides { steps: Some(0), ..Default::default() };
        assert!(resolve(Preset::Fig4b, &bad).is_err());
        assert!(resolve(Preset::Custom, &Overrides::default()).is_err());
        let custom = Overrides {
            model: Some(ModelKind::Lorentzian),
            quantity: Some(Quantity::Decoherence),
            ..Default::default()
        };
        assert!(matches!(resolve(Preset::Custom, &custom).unwrap(), Job::Curve(_)));
        assert!(resolve(Preset::Fig1a, &custom).is_err());
        let wrong_axis = Overrides { width: Some(1.0), ..Default::default() };
        // A width override on an Ohmic preset is silently irrelevant, but a
        // sweep over it is not.
        assert!(resolve(Preset::Fig1a, &wrong_axis).is_ok());
        let base = ohmic_base(3.0, 1.0);
        assert!(SweepParam::Width.apply(&base, 1.0).is_err());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(0.03, 3.0, 100);
        assert_eq!(v.len(), 100);
        assert_eq!(v[0], 0.03);
        assert_eq!(v[99], 3.0);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
