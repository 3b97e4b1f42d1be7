//! Power-law transport heating `ΔT(t) = A·(t/t_ref)^{−p}` seen through the
//! survival law after a fixed number of transport segments.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, numeric, LmOutcome};
use super::survival::{invert_tail, survival_tail, validate_points};
use super::{residual_variance, DataPoint, FitResult};
use crate::error::{Error, Result};
use crate::phys::{k_to_uk, uk_to_k};

/// Reference duration at which `A` is reported, seconds.
pub const POWER_LAW_T_REF: f64 = 100e-6;
const START_EXPONENTS: [f64; 5] = [4.0, 6.0, 8.0, 10.0, 12.0];

/// Fixed quantities of the experiment: every data point is the survival
/// after `segments` transports of duration `t`. Temperatures in Kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawContext {
    pub segments: u32,
    pub t0: f64,
    pub u0: f64,
    pub p0: f64,
}

impl PowerLawContext {
    fn validate(&self) -> Result<()> {
        if self.segments == 0 {
            return Err(Error::param("segments must be >= 1"));
        }
        super::SurvivalModel::new(self.p0, self.t0, 0.0, self.u0).map(|_| ())
    }

    /// Survival predicted for duration `t` given `ln A` (A in μK) and `p`.
    pub fn survival(&self, t: f64, ln_a_uk: f64, p: f64) -> f64 {
        let dt = uk_to_k((ln_a_uk - p * (t / POWER_LAW_T_REF).ln()).exp());
        self.p0 - survival_tail((self.t0 + dt * self.segments as f64) / self.u0)
    }

    /// `ln A` (μK) that puts the law through `(t, y)` for exponent `p`.
    fn ln_a_through(&self, t: f64, y: f64, p: f64) -> f64 {
        let floor = survival_tail(self.t0 / self.u0);
        let tail = self.p0 - y;
        let dt = if tail > floor && tail < 1.0 {
            (invert_tail(tail) * self.u0 - self.t0) / self.segments as f64
        } else {
            1e-3 * self.t0.max(1e-6 * self.u0) / self.segments as f64
        };
        k_to_uk(dt.max(1e-12 * self.u0)).ln() + p * (t / POWER_LAW_T_REF).ln()
    }
}

fn validate_times(points: &[DataPoint]) -> Result<()> {
    validate_points(points, 5)?;
    if points.iter().any(|p| !(p.x > 0.0)) {
        return Err(Error::param("durations must be > 0"));
    }
    let lo = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.x).fold(0.0, f64::max);
    if hi / lo < 1.0 + 1e-6 {
        return Err(Error::param("durations span a degenerate range"));
    }
    Ok(())
}

/// Data point closest to half-way between the lowest and highest survival.
fn mid_point(points: &[DataPoint]) -> &DataPoint {
    let lo = points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    points.iter().min_by(|a, b| (a.y - mid).abs().total_cmp(&(b.y - mid).abs())).expect("non-empty")
}

fn finish(out: LmOutcome, points: usize, fixed_p: Option<f64>) -> FitResult {
    let n_params = if fixed_p.is_some() { 1 } else { 2 };
    let s2 = residual_variance(out.ssr, points, n_params);
    let cov = |i: usize| out.inverse_hessian.as_ref().map_or(f64::NAN, |c| (c[(i, i)] * s2).sqrt());
    let a = out.x[0].exp();
    let mut fit = FitResult::empty();
    fit.set("A_uK", a, a * cov(0));
    match fixed_p {
        Some(p) => fit.set("p", p, 0.0),
        None => fit.set("p", out.x[1], cov(1)),
    }
    fit.residual_norm = out.ssr.sqrt();
    fit.converged = out.converged;
    fit.iterations = out.iterations;
    fit.diagnostics = out.diagnostics;
    fit
}

/// Fits `A` and `p`; point abscissae are transport durations in seconds.
///
/// The fit is started from `p ∈ {4, 6, 8, 10, 12}`, each with `A` chosen so
/// that the law passes through the point nearest mid-survival, and the
/// start reaching the smallest residual is kept.
pub fn fit_power_law(points: &[DataPoint], ctx: &PowerLawContext) -> Result<FitResult> {
    ctx.validate()?;
    validate_times(points)?;
    let residuals = |x: &DVector<f64>| {
        let r = points.iter().map(|p| p.weight() * (p.y - ctx.survival(p.x, x[0], x[1])));
        let r = DVector::from_iterator(points.len(), r);
        r.iter().all(|v| v.is_finite()).then_some(r)
    };
    let scale = DVector::from_vec(vec![1.0, 1.0]);
    let anchor = mid_point(points);
    let best = START_EXPONENTS
        .iter()
        .map(|&p| {
            let x0 = DVector::from_vec(vec![ctx.ln_a_through(anchor.x, anchor.y, p), p]);
            levenberg_marquardt(numeric(residuals, scale.clone()), x0, scale.clone())
        })
        .filter(|o| o.ssr.is_finite())
        .min_by(|a, b| (!a.converged, a.ssr).partial_cmp(&(!b.converged, b.ssr)).expect("finite"))
        .ok_or_else(|| Error::Numerical("power-law fit failed from every start".into()))?;
    Ok(finish(best, points.len(), None))
}

/// Fits only `A` with the exponent held at `p`.
pub fn fit_power_law_fixed_p(points: &[DataPoint], ctx: &PowerLawContext, p: f64) -> Result<FitResult> {
    ctx.validate()?;
    validate_times(points)?;
    if !p.is_finite() {
        return Err(Error::param("exponent must be finite"));
    }
    let residuals = |x: &DVector<f64>| {
        let r = points.iter().map(|pt| pt.weight() * (pt.y - ctx.survival(pt.x, x[0], p)));
        let r = DVector::from_iterator(points.len(), r);
        r.iter().all(|v| v.is_finite()).then_some(r)
    };
    let scale = DVector::from_vec(vec![1.0]);
    let anchor = mid_point(points);
    let x0 = DVector::from_vec(vec![ctx.ln_a_through(anchor.x, anchor.y, p)]);
    let out = levenberg_marquardt(numeric(residuals, scale.clone()), x0, scale);
    Ok(finish(out, points.len(), Some(p)))
}
