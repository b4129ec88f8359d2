use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cavity_qfi::scenario::{self, ContourSpec, CurveSpec, Job, ModelKind, Overrides, Preset, Quantity, SweepParam};
use cavity_qfi::verify::{run_suite, Suite, SuiteReport, VerifyOptions};
use cavity_qfi::{Error, QuadratureConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

const BUILD: &str = env!("CAVITY_QFI_BUILD");

#[derive(Parser)]
#[command(name = "cavity-qfi", version, about = "QFI and coherence of an atom in a dissipative cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the table for a figure preset.
    Run {
        /// fig1a..fig1d, fig2a, fig2b, fig3a, fig3b, fig4a, fig4a-inset,
        /// fig4b..fig4d, fig5a, fig5b, fig6a, fig6b or custom.
        preset: String,
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated couplings Omega (curve presets).
        #[arg(long, value_delimiter = ',')]
        omegas: Option<Vec<f64>>,
        /// Spectral family for the custom preset.
        #[arg(long)]
        model: Option<String>,
        /// fphi, ftheta, cl1, gamma or lamb (custom preset).
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Run the cross-check suites.
    Verify {
        /// Run a single suite.
        #[arg(long)]
        suite: Option<String>,
        /// Use this Ohmic cutoff in the oracle suites.
        #[arg(long, allow_hyphen_values = true)]
        omega_c: Option<f64>,
        /// Use this Lorentzian width in the oracle suites.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
    },
    /// Sweep one parameter; writes `t,param,value`.
    Sweep {
        #[arg(long)]
        model: String,
        /// omega, omega_c, lambda, theta or phi.
        #[arg(long)]
        param: String,
        /// A:B:N, N evenly spaced values from A to B.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value = "fphi")]
        quantity: String,
        /// Coupling Omega held fixed during the sweep.
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Closed,
    Numeric,
}

#[derive(Args)]
struct CommonArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    #[arg(long, value_enum, default_value = "closed")]
    mode: Mode,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega0: Option<f64>,
    /// Ohmic cutoff frequency.
    #[arg(long, allow_hyphen_values = true)]
    omega_c: Option<f64>,
    /// Lorentzian width.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Lorentzian dissipative rate R.
    #[arg(long, allow_hyphen_values = true)]
    rate: Option<f64>,
    /// Lorentzian detuning; defaults to Omega.
    #[arg(long, allow_hyphen_values = true)]
    detuning: Option<f64>,
    /// Half-width of the frequency window for numeric rates.
    #[arg(long)]
    freq_window: Option<f64>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        let quadrature = self.freq_window.map(|w| QuadratureConfig { freq_window: w, ..Default::default() });
        Overrides {
            steps: self.steps,
            t_end: self.t_end,
            numeric: matches!(self.mode, Mode::Numeric),
            quadrature,
            theta: self.theta,
            phi: self.phi,
            omega0: self.omega0,
            cutoff: self.omega_c,
            width: self.lambda,
            rate: self.rate,
            detuning: self.detuning,
            ..Default::default()
        }
    }
}

/// Failure with its exit status: 2 for bad configuration, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter { .. } | Error::UnsupportedClosedForm | Error::StepTooLarge(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { preset, common, omegas, model, quantity } => run(&preset, &common, omegas, model, quantity),
        Command::Verify { suite, omega_c, lambda } => verify(suite, omega_c, lambda),
        Command::Sweep { model, param, range, quantity, omega, common } => {
            sweep(&model, &param, &range, &quantity, omega, &common)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(
    preset: &str,
    common: &CommonArgs,
    omegas: Option<Vec<f64>>,
    model: Option<String>,
    quantity: Option<String>,
) -> Result<u8, Failure> {
    let preset: Preset = preset.parse()?;
    let mut ov = common.overrides();
    ov.couplings = omegas;
    ov.model = model.as_deref().map(str::parse::<ModelKind>).transpose()?;
    ov.quantity = quantity.as_deref().map(str::parse::<Quantity>).transpose()?;
    match scenario::resolve(preset, &ov)? {
        Job::Curve(spec) => write_curve(&spec, common.out.as_ref())?,
        Job::Contour(spec) => write_contour(&spec, common.out.as_ref())?,
    }
    Ok(0)
}

fn sweep(
    model: &str,
    param: &str,
    range: &str,
    quantity: &str,
    omega: Option<f64>,
    common: &CommonArgs,
) -> Result<u8, Failure> {
    let model: ModelKind = model.parse()?;
    let param: SweepParam = param.parse()?;
    let quantity: Quantity = quantity.parse()?;
    let values = parse_range(range)?;
    let mut ov = common.overrides();
    ov.couplings = omega.map(|w| vec![w]);
    let spec = scenario::sweep(model, param, values, quantity, &ov)?;
    write_contour(&spec, common.out.as_ref())?;
    Ok(0)
}

fn parse_range(range: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = range.split(':').collect();
    let bad = || config_error(format!("invalid --range `{range}`, expected A:B:N"));
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(scenario::linspace(a, b, n))
}

fn write_curve(spec: &CurveSpec, out: Option<&PathBuf>) -> Result<(), Failure> {
    let columns = spec
        .column_configs()
        .par_iter()
        .map(|cfg| scenario::evaluate_column(cfg, &spec.grid, spec.quantity, &spec.mode))
        .collect::<cavity_qfi::Result<Vec<_>>>()?;
    emit(out, |w| spec.write_csv(w, &columns, BUILD))
}

fn write_contour(spec: &ContourSpec, out: Option<&PathBuf>) -> Result<(), Failure> {
    let columns = spec
        .column_configs()?
        .par_iter()
        .map(|cfg| scenario::evaluate_column(cfg, &spec.grid, spec.quantity, &spec.mode))
        .collect::<cavity_qfi::Result<Vec<_>>>()?;
    emit(out, |w| spec.write_csv(w, &columns, BUILD))
}

fn emit(out: Option<&PathBuf>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let io_err = |path: &PathBuf, source| Failure::from(Error::Io { path: path.clone(), source });
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_err(path, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(&PathBuf::from("<stdout>"), e))
        }
    }
}

fn verify(suite: Option<String>, omega_c: Option<f64>, lambda: Option<f64>) -> Result<u8, Failure> {
    let suites = match suite {
        Some(name) => vec![name.parse::<Suite>()?],
        None => Suite::ALL.to_vec(),
    };
    let opts = VerifyOptions { cutoff: omega_c, width: lambda, ..Default::default() };
    opts.validate()?;
    let reports = suites.par_iter().map(|&s| run_suite(s, &opts)).collect::<cavity_qfi::Result<Vec<SuiteReport>>>()?;
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed() { "PASS" } else { "FAIL" };
        println!("[{status}] {}", report.suite);
        for c in &report.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            println!("    {mark} {}: {:.3e} (bound {:.1e})", c.label, c.achieved, c.tolerance);
        }
        all_passed &= report.passed();
    }
    println!("{} of {} suites passed", reports.iter().filter(|r| r.passed()).count(), reports.len());
    Ok(if all_passed { 0 } else { 1 })
}
