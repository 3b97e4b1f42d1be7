//! Total inter-site heating against summed squared mismatch.

use super::FitResult;
use crate::error::{Error, Result};
use crate::phys::{TrapConfig, K_B};

/// Basic heating of the two well-aligned exchanges together, μK.
pub const DEFAULT_BASIC_TOTAL_UK: f64 = 0.156;

/// μK/nm² → K/m².
const SLOPE_TO_SI: f64 = 1e-6 / 1e-18;

/// Ordinary least squares `ΔT = intercept + slope·δ²` on points
/// `(δ² in nm², ΔT in μK)`.
///
/// Derived quantities: `alpha = 2·slope·k_B/(m ω₀²)` from the trap, and
/// `transport_exp_uK = intercept − basic_total_uk`.
pub fn fit_mis_linear(points: &[(f64, f64)], trap: &TrapConfig, basic_total_uk: f64) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::param(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(Error::param("non-finite data point"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::param("all δ² values are equal"));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let s2 = ssr / (n - 2.0);
    let s_slope = (s2 / sxx).sqrt();
    let s_intercept = (s2 * (1.0 / n + mx * mx / sxx)).sqrt();

    let to_alpha = 2.0 * SLOPE_TO_SI * K_B / (trap.mass() * trap.omega0().powi(2));
    let mut fit = FitResult::empty();
    fit.set("slope_uK_per_nm2", slope, s_slope);
    fit.set("intercept_uK", intercept, s_intercept);
    fit.set("alpha", slope * to_alpha, s_slope * to_alpha);
    fit.set("transport_exp_uK", intercept - basic_total_uk, s_intercept);
    fit.residual_norm = ssr.sqrt();
    fit.converged = true;
    Ok(fit)
}
