//! Frequency/position conversion and trap mismatch arithmetic.

use crate::error::{Error, Result};

/// AOD frequency change per micrometre of trap displacement, from the
/// 1.615 MHz ↔ 5.6 μm calibration. The rounder 0.288 MHz/μm differs by 0.1 %.
pub const MHZ_PER_UM: f64 = 1.615 / 5.6;

/// Displacement in μm for an AOD frequency change in MHz.
pub fn freq_to_position(delta_f_mhz: f64) -> f64 {
    delta_f_mhz / MHZ_PER_UM
}

/// Distance in nm between a static-trap centre and a moving-trap setting,
/// both given as `(fx, fy)` in MHz.
pub fn mismatch_from_frequencies(static_trap: (f64, f64), moving_trap: (f64, f64)) -> f64 {
    let dx = static_trap.0 - moving_trap.0;
    let dy = static_trap.1 - moving_trap.1;
    1e3 * freq_to_position(dx.hypot(dy))
}

/// `dx_start² + dx_target²` (nm²) for mismatches in nm.
pub fn combine_mismatch(dx_start: f64, dx_target: f64) -> Result<f64> {
    if !(dx_start >= 0.0 && dx_target >= 0.0) {
        return Err(Error::domain(format!("mismatches must be >= 0, got {dx_start}, {dx_target}")));
    }
    Ok(dx_start * dx_start + dx_target * dx_target)
}

/// First-order uncertainty of [`combine_mismatch`]: the terms `2·δx·σ` added
/// in quadrature.
pub fn combine_mismatch_uncertainty(dx_start: f64, sigma_start: f64, dx_target: f64, sigma_target: f64) -> f64 {
    (2.0 * dx_start * sigma_start).hypot(2.0 * dx_target * sigma_target)
}
