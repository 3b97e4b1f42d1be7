//! Fitting and calibration: the truncated-Boltzmann survival law, power-law
//! transport heating, the misalignment regression, 2D Gaussian trap-centre
//! scans, mismatch arithmetic and fidelity decay.
//!
//! Fitted parameters are reported under names carrying their unit
//! (`delta_t_uK`, `cx_mhz`, ...); dimensionless ones are bare.

mod calibration;
mod fidelity;
mod gaussian2d;
mod linear;
mod lm;
mod power_law;
mod survival;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use calibration::{
    combine_mismatch, combine_mismatch_uncertainty, freq_to_position, mismatch_from_frequencies, MHZ_PER_UM,
};
pub use fidelity::fit_fidelity_decay;
pub use gaussian2d::{fit_gaussian2d, CalibrationScan, GaussianPeak, ScanPoint};
pub use linear::{fit_mis_linear, DEFAULT_BASIC_TOTAL_UK};
pub use power_law::{fit_power_law, fit_power_law_fixed_p, PowerLawContext, POWER_LAW_T_REF};
pub use survival::{fit_survival, survival_prob, survival_prob_checked, survival_tail, SurvivalModel};

/// One observation `y(x)` with an optional one-sigma error. Without an
/// error the point carries unit weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
    pub sigma: Option<f64>,
}

impl DataPoint {
    pub fn new(x: f64, y: f64, sigma: Option<f64>) -> Self {
        DataPoint { x, y, sigma }
    }

    /// A survival fraction measured in `trials` repetitions, weighted by
    /// [`binomial_stderr`].
    pub fn binomial(x: f64, survival: f64, trials: u64) -> Self {
        DataPoint { x, y: survival, sigma: Some(binomial_stderr(survival, trials)) }
    }

    pub(crate) fn weight(&self) -> f64 {
        match self.sigma {
            Some(s) if s > 0.0 && s.is_finite() => 1.0 / s,
            _ => 1.0,
        }
    }
}

/// Binomial standard error of an observed fraction, using the smoothed
/// estimate `p̃ = (k + ½)/(N + 1)` so that 0 % and 100 % points keep a
/// finite weight.
pub fn binomial_stderr(fraction: f64, trials: u64) -> f64 {
    let n = trials as f64;
    let p = (fraction * n + 0.5) / (n + 1.0);
    (p * (1.0 - p) / n).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub parameters: BTreeMap<String, f64>,
    /// One-sigma uncertainties, same keys as `parameters`.
    pub uncertainties: BTreeMap<String, f64>,
    /// `sqrt(Σ rᵢ²)` of the weighted residuals.
    pub residual_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    pub diagnostics: Vec<String>,
}

impl FitResult {
    pub(crate) fn empty() -> Self {
        FitResult {
            parameters: BTreeMap::new(),
            uncertainties: BTreeMap::new(),
            residual_norm: 0.0,
            converged: false,
            iterations: 0,
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn set(&mut self, name: &str, value: f64, sigma: f64) {
        self.parameters.insert(name.to_string(), value);
        self.uncertainties.insert(name.to_string(), sigma);
    }

    /// Value of a fitted parameter; panics on an unknown name.
    pub fn get(&self, name: &str) -> f64 {
        self.parameters[name]
    }

    pub fn sigma(&self, name: &str) -> f64 {
        self.uncertainties[name]
    }
}

/// Residual variance `SSR / (m − n)` used to scale covariances; 1 when there
/// are no degrees of freedom left.
pub(crate) fn residual_variance(ssr: f64, points: usize, params: usize) -> f64 {
    if points > params {
        ssr / (points - params) as f64
    } else {
        1.0
    }
}
