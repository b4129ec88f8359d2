use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no closed form for a tabulated spectral density; evaluate the rates with gamma_numeric/beta_numeric")]
    UnsupportedClosedForm,

    #[error("quadrature did not converge: error estimate {error_estimate:e} after {subdivisions} subdivisions")]
    QuadratureFailure { error_estimate: f64, subdivisions: usize },

    #[error("invalid amplitude: |p| = {0} exceeds 1")]
    InvalidAmplitude(f64),

    #[error("state is pure (det = {0:e}); the determinant formula is singular, use qfi_closed")]
    PureStateSingularity(f64),

    #[error("integrator step too large: (omega0 + Omega) * step = {0} > 0.05")]
    StepTooLarge(f64),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
