//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`. Curves are laid out as
//! `[t_0..t_n, col_0..., col_1..., ...]`; contours as one row of `n + 1`
//! time samples per parameter value.

use cavity_qfi::scenario::{self, ModelKind, Overrides, Quantity, SweepParam};
use cavity_qfi::{RateMode, SpectralModel, SystemConfig, TimeGrid};
use wasm_bindgen::prelude::*;

fn base(model: &str, spectral_param: f64) -> Result<SystemConfig, String> {
    let spectral = match model.parse::<ModelKind>().map_err(|e| e.to_string())? {
        ModelKind::Ohmic => SpectralModel::ohmic(spectral_param),
        ModelKind::Lorentzian => SpectralModel::lorentzian(1.0, spectral_param),
    };
    Ok(SystemConfig::new(1.0, 1.0, spectral))
}

/// Time samples followed by one column of `quantity` per coupling.
pub fn curves(
    model: &str,
    spectral_param: f64,
    theta: f64,
    couplings: &[f64],
    quantity: &str,
    t_end: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let quantity: Quantity = quantity.parse().map_err(|e: cavity_qfi::Error| e.to_string())?;
    let grid = TimeGrid::new(t_end, steps).map_err(|e| e.to_string())?;
    let mut out: Vec<f64> = grid.times().collect();
    for &w in couplings {
        let cfg = SystemConfig { coupling: w, theta, ..base(model, spectral_param)? };
        cfg.validate().map_err(|e| e.to_string())?;
        out.extend(scenario::evaluate_column(&cfg, &grid, quantity, &RateMode::Closed).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// `F_phi` over `values` of `param` (`omega`, `omega_c` or `lambda`),
/// one row per value.
#[allow(clippy::too_many_arguments)]
pub fn contour(
    model: &str,
    spectral_param: f64,
    coupling: f64,
    param: &str,
    from: f64,
    to: f64,
    count: usize,
    t_end: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let kind: ModelKind = model.parse().map_err(|e: cavity_qfi::Error| e.to_string())?;
    let param: SweepParam = param.parse().map_err(|e: cavity_qfi::Error| e.to_string())?;
    let ov = Overrides {
        t_end: Some(t_end),
        steps: Some(steps),
        couplings: Some(vec![coupling]),
        cutoff: Some(spectral_param),
        width: Some(spectral_param),
        ..Default::default()
    };
    let values = scenario::linspace(from, to, count);
    let spec = scenario::sweep(kind, param, values, Quantity::FPhi, &ov).map_err(|e| e.to_string())?;
    let columns = spec.evaluate().map_err(|e| e.to_string())?;
    Ok(columns.concat())
}

#[wasm_bindgen(js_name = curves)]
pub fn curves_js(
    model: &str,
    spectral_param: f64,
    theta: f64,
    couplings: Vec<f64>,
    quantity: &str,
    t_end: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    curves(model, spectral_param, theta, &couplings, quantity, t_end, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = contour)]
#[allow(clippy::too_many_arguments)]
pub fn contour_js(
    model: &str,
    spectral_param: f64,
    coupling: f64,
    param: &str,
    from: f64,
    to: f64,
    count: usize,
    t_end: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    contour(model, spectral_param, coupling, param, from, to, count, t_end, steps).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_layout() {
        let out = curves("ohmic", 3.0, std::f64::consts::FRAC_PI_2, &[0.01, 1.0], "fphi", 20.0, 100).unwrap();
        assert_eq!(out.len(), 3 * 101);
        assert_eq!(out[0], 0.0);
        assert_eq!(out[100], 20.0);
        assert_eq!((out[101], out[202]), (1.0, 1.0));
        // Weak coupling decays away; Omega = omega0 keeps a finite QFI.
        assert!(out[201] < 1e-3);
        assert!(out[302] > 0.2);
    }

    #[test]
    fn decoherence_curve_starts_at_zero() {
        let out = curves("lorentzian", 0.1, 1.0, &[0.5], "gamma", 50.0, 50).unwrap();
        assert_eq!(out[51], 0.0);
        assert!(out[52..].iter().all(|g| g.is_finite()));
    }

    #[test]
    fn contour_rows_start_at_one() {
        let out = contour("lorentzian", 0.1, 1.0, "omega", 0.0, 1.0, 5, 50.0, 40).unwrap();
        assert_eq!(out.len(), 5 * 41);
        for row in out.chunks(41) {
            assert!((row[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(curves("gaussian", 1.0, 1.0, &[1.0], "fphi", 1.0, 10).is_err());
        assert!(curves("ohmic", -1.0, 1.0, &[1.0], "fphi", 1.0, 10).is_err());
        assert!(contour("ohmic", 3.0, 1.0, "lambda", 0.1, 1.0, 3, 1.0, 10).is_err());
    }
}
