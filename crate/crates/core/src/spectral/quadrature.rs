//! Composite Gauss–Legendre evaluation of `∫₀¹ p''(s) e^{−iθs} ds`.
//!
//! This is the numerical counterpart of the closed forms: it only samples
//! the profile's second derivative and never uses endpoint expansions. The
//! panel count follows the oscillation of both the kernel and the profile,
//! and is doubled until two successive levels agree.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::trajectories::MotionProfile;

const NODES_PER_PANEL: usize = 10;
const PANELS_PER_PERIOD: usize = 4;
const MAX_DOUBLINGS: usize = 14;
/// Largest composite rule attempted.
pub const MAX_PANELS: usize = 1 << 22;

/// Relative agreement required between a level and its half-step refinement.
pub const REFINEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureEstimate {
    pub value: Complex64,
    pub panels: usize,
    /// Difference between the last two refinement levels.
    pub refinement_delta: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES_PER_PANEL))
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct Accumulator {
    sum: Complex64,
    carry: Complex64,
}

impl Accumulator {
    fn add_part(sum: &mut f64, carry: &mut f64, v: f64) {
        let t = *sum + v;
        if sum.abs() >= v.abs() {
            *carry += (*sum - t) + v;
        } else {
            *carry += (v - t) + *sum;
        }
        *sum = t;
    }

    fn add(&mut self, v: Complex64) {
        Self::add_part(&mut self.sum.re, &mut self.carry.re, v.re);
        Self::add_part(&mut self.sum.im, &mut self.carry.im, v.im);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn composite(profile: &MotionProfile, theta: f64, panels: usize) -> (Complex64, f64) {
    let (nodes, weights) = rule();
    let h = 1.0 / panels as f64;
    let mut acc = Accumulator::default();
    let mut magnitude = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        for (x, w) in nodes.iter().zip(weights) {
            let s = a + 0.5 * h * (x + 1.0);
            let q = profile.value(s, 2);
            let wq = 0.5 * h * w * q;
            magnitude += wq.abs();
            acc.add(wq * Complex64::from_polar(1.0, -theta * s));
        }
    }
    (acc.total(), magnitude)
}

/// Initial panel count: at least four panels per period of `e^{−iθs}` and per
/// own oscillation of the profile, i.e. ≥ 40 samples per period.
pub fn initial_panels(profile: &MotionProfile, theta: f64) -> usize {
    let kernel = (theta.abs() / (2.0 * PI)).ceil() as usize;
    let own = profile.oscillation_periods().ceil() as usize;
    PANELS_PER_PERIOD * kernel.max(own).max(1)
}

/// Smooth part of the normalised spectrum by adaptive composite quadrature.
pub fn normalized_spectrum_quadrature(profile: &MotionProfile, theta: f64) -> Result<QuadratureEstimate> {
    let mut panels = initial_panels(profile, theta);
    if panels > MAX_PANELS / 2 {
        return Err(Error::Numerical(format!(
            "θ = {theta} needs {panels} panels before refinement; limit is {MAX_PANELS}"
        )));
    }
    let (mut coarse, _) = composite(profile, theta, panels);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        if panels > MAX_PANELS {
            break;
        }
        let (fine, magnitude) = composite(profile, theta, panels);
        let delta = (fine - coarse).norm();
        // rounding floor: phase error grows with θ, summation error with size
        let floor = 64.0 * f64::EPSILON * (1.0 + theta.abs()) * magnitude;
        if delta <= REFINEMENT_TOLERANCE * fine.norm() || delta <= floor {
            return Ok(QuadratureEstimate { value: fine, panels, refinement_delta: delta });
        }
        coarse = fine;
    }
    Err(Error::Numerical(format!("oscillatory quadrature did not settle for θ = {theta} after {panels} panels")))
}
