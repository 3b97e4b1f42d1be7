//! Exponential decay of state fidelity over repeated transfers,
//! `F(n) = f0·fⁿ`.

use nalgebra::{DMatrix, DVector};

use super::lm::levenberg_marquardt;
use super::survival::validate_points;
use super::{residual_variance, DataPoint, FitResult};
use crate::error::{Error, Result};

/// Weighted fit of `f0·fⁿ`; point abscissae are cycle counts. Starts from
/// the weighted regression of `ln F` on `n`.
pub fn fit_fidelity_decay(points: &[DataPoint]) -> Result<FitResult> {
    validate_points(points, 3)?;
    if let Some(p) = points.iter().find(|p| p.y <= 0.0) {
        return Err(Error::domain(format!("fidelity must be > 0, got {} at n = {}", p.y, p.x)));
    }

    // ln F has standard error σ/F
    let w: Vec<f64> = points.iter().map(|p| (p.weight() * p.y).powi(2)).collect();
    let sw: f64 = w.iter().sum();
    let mx = points.iter().zip(&w).map(|(p, w)| w * p.x).sum::<f64>() / sw;
    let my = points.iter().zip(&w).map(|(p, w)| w * p.y.ln()).sum::<f64>() / sw;
    let sxx: f64 = points.iter().zip(&w).map(|(p, w)| w * (p.x - mx).powi(2)).sum();
    let sxy: f64 = points.iter().zip(&w).map(|(p, w)| w * (p.x - mx) * (p.y.ln() - my)).sum();
    let b = sxy / sxx;
    let init = DVector::from_vec(vec![(my - b * mx).exp(), b.exp()]);

    let eval = |x: &DVector<f64>| {
        let (f0, f) = (x[0], x[1]);
        if !(f > 0.0) {
            return None;
        }
        let mut r = DVector::zeros(points.len());
        let mut j = DMatrix::zeros(points.len(), 2);
        for (i, p) in points.iter().enumerate() {
            let w = p.weight();
            let fn_ = f.powf(p.x);
            r[i] = w * (p.y - f0 * fn_);
            j[(i, 0)] = -w * fn_;
            j[(i, 1)] = -w * f0 * p.x * f.powf(p.x - 1.0);
        }
        Some((r, j))
    };
    let out = levenberg_marquardt(eval, init, DVector::from_vec(vec![1.0, 1.0]));
    let s2 = residual_variance(out.ssr, points.len(), 2);
    let sd = |i: usize| out.inverse_hessian.as_ref().map_or(f64::NAN, |c| (c[(i, i)] * s2).sqrt());
    let mut fit = FitResult::empty();
    fit.set("f0", out.x[0], sd(0));
    fit.set("f", out.x[1], sd(1));
    fit.residual_norm = out.ssr.sqrt();
    fit.converged = out.converged;
    fit.iterations = out.iterations;
    fit.diagnostics = out.diagnostics;
    Ok(fit)
}
