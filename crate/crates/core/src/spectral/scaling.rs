//! Envelope scaling of the phonon gain with transport duration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::delta_n;
use crate::error::{Error, Result};
use crate::phys::TrapConfig;
use crate::trajectories::{MotionPlan, MotionProfile, PlanPurpose};

/// Smallest admissible `ω₀·t` for a scaling-study time.
pub const MIN_OMEGA_T: f64 = 20.0;
const MIN_TIMES: usize = 6;
const MIN_POINTS_PER_DECADE: usize = 200;
const GRID_POINTS_PER_OSCILLATION: f64 = 16.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingStudy {
    /// `p` in `ΔN ∝ t^{−p}` fitted on the upper envelope.
    pub exponent: f64,
    pub exponent_stderr: f64,
    /// `(t, ΔN)` at the requested times.
    pub samples: Vec<(f64, f64)>,
    /// Refined local maxima `(t, ΔN)` used by the fit.
    pub envelope: Vec<(f64, f64)>,
}

fn gain(profile: &MotionProfile, trap: &TrapConfig, distance: f64, t: f64) -> f64 {
    let plan = MotionPlan::new(profile.clone(), distance, t, PlanPurpose::Transport)
        .expect("durations are validated before evaluation");
    delta_n(&plan, trap).delta_n
}

/// Golden-section maximisation of `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, stderr_b)`.
fn ols(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ssr: f64 = points.iter().map(|p| (p.1 - a - b * p.0).powi(2)).sum();
    let se = if points.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (a, b, se)
}

/// Fits `ΔN ∝ t^{−p}` to the upper envelope of `ΔN(t)` between the smallest
/// and largest of `times`.
///
/// `ΔN(t)` oscillates with `ω₀t`, so it is tabulated on a log-spaced grid
/// (at least 200 points per decade and 16 per oscillation), every interior
/// local maximum is refined by golden-section search, and `ln ΔN` of the
/// maxima is regressed on `ln t`.
pub fn scaling_study(profile: &MotionProfile, trap: &TrapConfig, distance: f64, times: &[f64]) -> Result<ScalingStudy> {
    if times.len() < MIN_TIMES {
        return Err(Error::param(format!("need at least {MIN_TIMES} times, got {}", times.len())));
    }
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(Error::param(format!("distance must be > 0, got {distance}")));
    }
    let w = trap.omega0();
    for &t in times {
        if !(t.is_finite() && t * w >= MIN_OMEGA_T) {
            return Err(Error::param(format!("ω₀·t = {} is below {MIN_OMEGA_T}", t * w)));
        }
    }
    let t_min = times.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let decades = (t_max / t_min).log10();
    if decades < 1.0 {
        return Err(Error::param(format!("times span {decades:.3} decades; at least one is required")));
    }

    let per_decade = MIN_POINTS_PER_DECADE
        .max((GRID_POINTS_PER_OSCILLATION * w * t_max * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI)).ceil()
            as usize);
    let n = (decades * per_decade as f64).ceil() as usize + 1;
    let ln_min = t_min.ln();
    let step = (t_max.ln() - ln_min) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| (ln_min + step * i as f64).exp()).collect();
    let values: Vec<f64> = grid.par_iter().map(|&t| gain(profile, trap, distance, t)).collect();

    let brackets: Vec<(f64, f64)> = (1..n - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .map(|i| (grid[i - 1], grid[i + 1]))
        .collect();
    let envelope: Vec<(f64, f64)> =
        brackets.par_iter().map(|&(a, b)| golden_max(|t| gain(profile, trap, distance, t), a, b)).collect();
    if envelope.len() < 3 {
        return Err(Error::Numerical(format!(
            "only {} envelope maxima found between {t_min} s and {t_max} s",
            envelope.len()
        )));
    }
    let logs: Vec<(f64, f64)> = envelope.iter().map(|&(t, g)| (t.ln(), g.ln())).collect();
    if logs.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::Numerical("non-positive phonon gain on the envelope".into()));
    }
    let (_, slope, se) = ols(&logs);
    let samples = times.iter().map(|&t| (t, gain(profile, trap, distance, t))).collect();
    Ok(ScalingStudy { exponent: -slope, exponent_stderr: se, samples, envelope })
}
