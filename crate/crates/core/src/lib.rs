//! Open-system dynamics of a two-level atom coupled to a leaky cavity mode
//! at zero temperature, in the one-excitation sector, and the metrology
//! quantities derived from it: quantum Fisher information of the phase and
//! polar angle of the initial state, and l1-norm coherence.
//!
//! Modules:
//! - [`spectral`]: Ohmic, Lorentzian and tabulated reservoirs; decay rates
//!   in closed form and by quadrature.
//! - [`dynamics`]: excited-state amplitude, atom state, time-local rates.
//! - [`metrics`]: QFI and coherence.
//! - [`mesolve`]: dressed-state master equation and partial trace.
//! - [`scenario`]: figure presets, sweeps and CSV output.
//! - [`verify`]: cross-check suites.

pub mod dynamics;
pub mod error;
pub mod mesolve;
pub mod metrics;
pub mod quadrature;
pub mod scenario;
pub mod spectral;
pub mod verify;

pub use dynamics::{
    amplitude, amplitude_at, atom_state, decoherence_rate, lamb_shift, timelocal_rates, AmplitudeSeries, QubitState,
    RateMode, SystemConfig, TimeGrid, TimeLocalRates, C64,
};
pub use error::{Error, Result};
pub use mesolve::{
    evolve, initial_dressed, partial_trace_cavity, timelocal_residual, DressedDensity, IntegratorConfig,
};
pub use metrics::{coherence_l1, metric_series, qfi_closed, qfi_general_2x2, MetricSample, Qfi};
pub use spectral::{QuadratureConfig, Reservoir, SpectralModel};
