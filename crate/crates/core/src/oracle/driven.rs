//! Classical driven oscillator `ẍ = −ω₀²(x − x_c(t))` by fixed-step RK4.
//!
//! Integration runs in the comoving frame `y = x − x_c`, `w = ẋ − ẋ_c`,
//! where the equations read `ẏ = w`, `ẇ = −ω₀² y − ẍ_c`. The transport
//! distance then never enters the state, only the small lag behind the trap.

use super::{energy, SimState};
use crate::error::{Error, Result};
use crate::phys::TrapConfig;
use crate::trajectories::MotionPlan;

const MAX_STEPS: u64 = 500_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Steps per `min(2π/ω₀, T)`. At least 200.
    pub steps_per_scale: u32,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions { steps_per_scale: 4000 }
    }
}

pub fn simulate_driven(plan: &MotionPlan, trap: &TrapConfig, initial: SimState) -> Result<SimState> {
    simulate_driven_with(plan, trap, initial, IntegratorOptions::default())
}

pub fn simulate_driven_with(
    plan: &MotionPlan,
    trap: &TrapConfig,
    initial: SimState,
    options: IntegratorOptions,
) -> Result<SimState> {
    if options.steps_per_scale < 200 {
        return Err(Error::param(format!("steps_per_scale must be >= 200, got {}", options.steps_per_scale)));
    }
    let duration = plan.duration();
    let w = trap.omega0();
    let scale = (2.0 * std::f64::consts::PI / w).min(duration);
    let steps = (duration / scale * options.steps_per_scale as f64).ceil();
    if !(steps <= MAX_STEPS as f64) {
        return Err(Error::Numerical(format!(
            "integration needs {steps:e} steps (ω₀T = {:.3e}); limit is {MAX_STEPS}",
            w * duration
        )));
    }
    let steps = steps as u64;
    let h = duration / steps as f64;
    if !(h > duration * 1e-14) || !(h > 0.0) {
        return Err(Error::Numerical(format!("step size {h:e} s underflows duration {duration:e} s")));
    }

    let w2 = w * w;
    let forcing = |t: f64| plan.acceleration(t);
    let mut y = initial.position - plan.position(0.0);
    let mut v = initial.velocity - plan.velocity(0.0);
    let mut a_prev = forcing(0.0);
    for i in 0..steps {
        let t = i as f64 * h;
        let a_mid = forcing(t + 0.5 * h);
        let a_end = forcing(if i + 1 == steps { duration } else { (i + 1) as f64 * h });
        let k1y = v;
        let k1v = -w2 * y - a_prev;
        let k2y = v + 0.5 * h * k1v;
        let k2v = -w2 * (y + 0.5 * h * k1y) - a_mid;
        let k3y = v + 0.5 * h * k2v;
        let k3v = -w2 * (y + 0.5 * h * k2y) - a_mid;
        let k4y = v + h * k3v;
        let k4v = -w2 * (y + h * k3y) - a_end;
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        a_prev = a_end;
    }
    if !(y.is_finite() && v.is_finite()) {
        return Err(Error::Numerical("integration produced a non-finite state".into()));
    }
    let xc = plan.position(duration);
    let vc = plan.velocity(duration);
    Ok(SimState { position: xc + y, velocity: vc + v, energy: energy(trap, y, v) })
}
