//! Trap-centre calibration from a 2D scan of survival over AOD frequencies.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lm::levenberg_marquardt;
use super::{binomial_stderr, residual_variance, FitResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub fx_mhz: f64,
    pub fy_mhz: f64,
    pub survival: f64,
    /// Repetitions behind `survival`; 0 means unweighted.
    pub trials: u64,
}

/// `offset + amplitude·exp(−(fx−cx)²/2σx² − (fy−cy)²/2σy²)`, MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPeak {
    pub center: (f64, f64),
    pub widths: (f64, f64),
    pub amplitude: f64,
    pub offset: f64,
}

impl GaussianPeak {
    pub fn eval(&self, fx: f64, fy: f64) -> f64 {
        let u = (fx - self.center.0) / self.widths.0;
        let v = (fy - self.center.1) / self.widths.1;
        self.offset + self.amplitude * (-0.5 * (u * u + v * v)).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationScan {
    grid: Vec<ScanPoint>,
    fitted: Option<GaussianPeak>,
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl CalibrationScan {
    /// Requires survival in `[0, 1]` everywhere and at least 4 distinct
    /// frequencies along each axis.
    pub fn new(grid: Vec<ScanPoint>) -> Result<Self> {
        for p in &grid {
            if !(0.0..=1.0).contains(&p.survival) {
                return Err(Error::domain(format!("survival {} outside [0, 1]", p.survival)));
            }
            if !(p.fx_mhz.is_finite() && p.fy_mhz.is_finite()) {
                return Err(Error::param("non-finite scan frequency"));
            }
        }
        let nx = distinct(grid.iter().map(|p| p.fx_mhz)).len();
        let ny = distinct(grid.iter().map(|p| p.fy_mhz)).len();
        if nx < 4 || ny < 4 {
            return Err(Error::param(format!("scan must span at least 4×4 points, got {nx}×{ny}")));
        }
        Ok(CalibrationScan { grid, fitted: None })
    }

    pub fn grid(&self) -> &[ScanPoint] {
        &self.grid
    }

    pub fn fitted(&self) -> Option<&GaussianPeak> {
        self.fitted.as_ref()
    }

    /// `(fx_min, fx_max, fy_min, fy_max)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let fx = distinct(self.grid.iter().map(|p| p.fx_mhz));
        let fy = distinct(self.grid.iter().map(|p| p.fy_mhz));
        (fx[0], fx[fx.len() - 1], fy[0], fy[fy.len() - 1])
    }

    /// Fits the scan and stores the peak. A centre outside the scanned
    /// rectangle is rejected.
    pub fn fit(&mut self) -> Result<FitResult> {
        let (fit, peak) = fit_gaussian2d(self)?;
        let (x0, x1, y0, y1) = self.bounds();
        if !(x0..=x1).contains(&peak.center.0) || !(y0..=y1).contains(&peak.center.1) {
            return Err(Error::Numerical(format!(
                "fitted centre ({}, {}) lies outside the scan",
                peak.center.0, peak.center.1
            )));
        }
        self.fitted = Some(peak);
        Ok(fit)
    }
}

/// Weighted 2D Gaussian fit. Initialisation: centre at the best grid point,
/// widths at half the scanned span, offset at the minimum and amplitude at
/// the range of the data.
pub fn fit_gaussian2d(scan: &CalibrationScan) -> Result<(FitResult, GaussianPeak)> {
    let grid = &scan.grid;
    let (x0, x1, y0, y1) = scan.bounds();
    let (ox, oy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let weights: Vec<f64> =
        grid.iter().map(|p| if p.trials > 0 { 1.0 / binomial_stderr(p.survival, p.trials) } else { 1.0 }).collect();

    let best = grid.iter().max_by(|a, b| a.survival.total_cmp(&b.survival)).expect("non-empty grid");
    let lo = grid.iter().map(|p| p.survival).fold(f64::INFINITY, f64::min);
    let mut diagnostics = Vec::new();
    if best.fx_mhz == x0 || best.fx_mhz == x1 || best.fy_mhz == y0 || best.fy_mhz == y1 {
        diagnostics.push("warning: survival maximum lies on the scan boundary".to_string());
    }
    let init = DVector::from_vec(vec![
        best.fx_mhz - ox,
        best.fy_mhz - oy,
        0.5 * (x1 - x0),
        0.5 * (y1 - y0),
        best.survival - lo,
        lo,
    ]);
    let span = (x1 - x0).max(y1 - y0);
    let scale = DVector::from_vec(vec![span, span, span, span, 1.0, 1.0]);

    let eval = |x: &DVector<f64>| {
        let (cx, cy, sx, sy, a, off) = (x[0], x[1], x[2], x[3], x[4], x[5]);
        if sx == 0.0 || sy == 0.0 {
            return None;
        }
        let mut r = DVector::zeros(grid.len());
        let mut j = DMatrix::zeros(grid.len(), 6);
        for (i, (p, w)) in grid.iter().zip(&weights).enumerate() {
            let du = p.fx_mhz - ox - cx;
            let dv = p.fy_mhz - oy - cy;
            let g = (-0.5 * (du * du / (sx * sx) + dv * dv / (sy * sy))).exp();
            r[i] = w * (p.survival - off - a * g);
            let ag = a * g;
            j[(i, 0)] = -w * ag * du / (sx * sx);
            j[(i, 1)] = -w * ag * dv / (sy * sy);
            j[(i, 2)] = -w * ag * du * du / (sx * sx * sx);
            j[(i, 3)] = -w * ag * dv * dv / (sy * sy * sy);
            j[(i, 4)] = -w * g;
            j[(i, 5)] = -w;
        }
        Some((r, j))
    };
    let out = levenberg_marquardt(eval, init, scale);
    let s2 = residual_variance(out.ssr, grid.len(), 6);
    let sd = |i: usize| out.inverse_hessian.as_ref().map_or(f64::NAN, |c| (c[(i, i)] * s2).sqrt());

    let peak = GaussianPeak {
        center: (out.x[0] + ox, out.x[1] + oy),
        widths: (out.x[2].abs(), out.x[3].abs()),
        amplitude: out.x[4],
        offset: out.x[5],
    };
    let mut fit = FitResult::empty();
    fit.set("cx_mhz", peak.center.0, sd(0));
    fit.set("cy_mhz", peak.center.1, sd(1));
    fit.set("sigma_x_mhz", peak.widths.0, sd(2));
    fit.set("sigma_y_mhz", peak.widths.1, sd(3));
    fit.set("amplitude", peak.amplitude, sd(4));
    fit.set("offset", peak.offset, sd(5));
    fit.residual_norm = out.ssr.sqrt();
    fit.converged = out.converged;
    fit.iterations = out.iterations;
    diagnostics.extend(out.diagnostics);
    if !(x0..=x1).contains(&peak.center.0) || !(y0..=y1).contains(&peak.center.1) {
        diagnostics.push("warning: fitted centre lies outside the scanned rectangle".into());
    }
    fit.diagnostics = diagnostics;
    Ok((fit, peak))
}
