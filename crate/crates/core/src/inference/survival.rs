//! Truncated-Boltzmann survival law under linear heating:
//! `ζ = (T₀ + ΔT·n)/U₀`, `P(n) = P₀ − (1 + 1/ζ + 1/(2ζ²))·e^{−1/ζ}`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, numeric};
use super::{residual_variance, DataPoint, FitResult};
use crate::error::{Error, Result};
use crate::phys::{k_to_uk, uk_to_k};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalModel {
    p0: f64,
    t0: f64,
    delta_t_per_cycle: f64,
    u0: f64,
}

impl SurvivalModel {
    /// Temperatures and depth in Kelvin.
    pub fn new(p0: f64, t0: f64, delta_t_per_cycle: f64, u0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::domain(format!("p0 must lie in [0, 1], got {p0}")));
        }
        if !(t0 >= 0.0 && t0.is_finite()) {
            return Err(Error::domain(format!("t0 must be >= 0, got {t0}")));
        }
        if !(delta_t_per_cycle >= 0.0 && delta_t_per_cycle.is_finite()) {
            return Err(Error::domain(format!("delta_t_per_cycle must be >= 0, got {delta_t_per_cycle}")));
        }
        if !(u0 > 0.0 && u0.is_finite()) {
            return Err(Error::domain(format!("u0 must be > 0, got {u0}")));
        }
        Ok(SurvivalModel { p0, t0, delta_t_per_cycle, u0 })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn delta_t_per_cycle(&self) -> f64 {
        self.delta_t_per_cycle
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn zeta(&self, n: f64) -> f64 {
        (self.t0 + self.delta_t_per_cycle * n) / self.u0
    }
}

/// Fraction of a Gamma(3, 1) energy distribution at temperature `ζ·U₀` that
/// lies above the depth: `(1 + x + x²/2) e^{−x}` with `x = 1/ζ`.
pub fn survival_tail(zeta: f64) -> f64 {
    if zeta <= 0.0 {
        return 0.0;
    }
    let x = 1.0 / zeta;
    (-x).exp() * (1.0 + x + 0.5 * x * x)
}

fn unclamped(p0: f64, zeta: f64) -> f64 {
    p0 - survival_tail(zeta)
}

/// Survival after `n` cycles and whether the raw value had to be clamped
/// into `[0, 1]`.
pub fn survival_prob_checked(model: &SurvivalModel, n: f64) -> (f64, bool) {
    let raw = unclamped(model.p0, model.zeta(n));
    let clamped = raw.clamp(0.0, 1.0);
    (clamped, clamped != raw)
}

pub fn survival_prob(model: &SurvivalModel, n: f64) -> f64 {
    survival_prob_checked(model, n).0
}

/// `ζ` with `survival_tail(ζ) = tail`, by bisection in `ln ζ`.
pub(crate) fn invert_tail(tail: f64) -> f64 {
    let (mut lo, mut hi) = ((1e-4f64).ln(), (1e4f64).ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if survival_tail(mid.exp()) < tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

pub(crate) fn validate_points(points: &[DataPoint], min: usize) -> Result<()> {
    if points.len() < min {
        return Err(Error::param(format!("need at least {min} points, got {}", points.len())));
    }
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::param("non-finite data point"));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < points.len() {
        return Err(Error::param("abscissae must be distinct"));
    }
    Ok(())
}

/// Weighted least squares of the survival law over `(P₀, ΔT)` with `T₀` and
/// `U₀` fixed (Kelvin). Point abscissae are cycle counts.
///
/// Initialisation: `P₀` is the largest observed survival and `ΔT` makes the
/// law pass through the point with the most cycles. `ΔT` is fitted in
/// logarithmic form, which keeps it positive.
pub fn fit_survival(points: &[DataPoint], t0: f64, u0: f64) -> Result<(FitResult, SurvivalModel)> {
    validate_points(points, 4)?;
    if points.iter().any(|p| p.x < 0.0) {
        return Err(Error::param("cycle counts must be >= 0"));
    }
    SurvivalModel::new(1.0, t0, 0.0, u0)?;

    let p0_init = points.iter().map(|p| p.y).fold(f64::MIN, f64::max).clamp(0.0, 1.0);
    let last = points.iter().max_by(|a, b| a.x.total_cmp(&b.x)).expect("non-empty");
    let tail = p0_init - last.y;
    let dt_init = if last.x > 0.0 && tail > survival_tail(t0 / u0) {
        ((invert_tail(tail) * u0 - t0) / last.x).max(1e-3 * t0.max(u0 * 1e-6) / last.x)
    } else {
        1e-3 * t0.max(u0 * 1e-6) / last.x.max(1.0)
    };

    let residuals = |x: &DVector<f64>| {
        let dt = uk_to_k(x[1].exp());
        let r = points.iter().map(|p| p.weight() * (p.y - unclamped(x[0], (t0 + dt * p.x) / u0)));
        Some(DVector::from_iterator(points.len(), r))
    };
    let scale = DVector::from_vec(vec![1.0, 1.0]);
    let x0 = DVector::from_vec(vec![p0_init, k_to_uk(dt_init).ln()]);
    let out = levenberg_marquardt(numeric(residuals, scale.clone()), x0, scale);

    let s2 = residual_variance(out.ssr, points.len(), 2);
    let dt_uk = out.x[1].exp();
    let (sp0, sdt) = match &out.inverse_hessian {
        Some(c) => ((c[(0, 0)] * s2).sqrt(), dt_uk * (c[(1, 1)] * s2).sqrt()),
        None => (f64::NAN, f64::NAN),
    };
    let mut fit = FitResult::empty();
    fit.set("p0", out.x[0], sp0);
    fit.set("delta_t_uK", dt_uk, sdt);
    fit.residual_norm = out.ssr.sqrt();
    fit.converged = out.converged;
    fit.iterations = out.iterations;
    fit.diagnostics = out.diagnostics;

    let p0 = out.x[0];
    if !(0.0..=1.0).contains(&p0) {
        fit.diagnostics.push(format!("fitted p0 = {p0} lies outside [0, 1]; model clamped"));
    }
    let model = SurvivalModel::new(p0.clamp(0.0, 1.0), t0, uk_to_k(dt_uk), u0)?;
    if points.iter().any(|p| survival_prob_checked(&model, p.x).1) {
        fit.diagnostics.push("survival law clamped to [0, 1] at some data points".into());
    }
    Ok((fit, model))
}
