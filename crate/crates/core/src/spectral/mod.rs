//! Acceleration spectra and the phonon gain of a driven harmonic trap.
//!
//! For a plan `x_c(t) = D·p(t/T)` the acceleration spectrum is
//! `ã(ω) = ∫ a(t) e^{−iωt} dt = (D/T)·∫₀¹ p''(s) e^{−iωTs} ds`, and the mean
//! phonon gain of an atom in a trap of frequency ω₀ is
//! `ΔN = |ã(ω₀)|² / (2 x_zpf ω₀)²`.

mod budget;
mod closed_form;
mod quadrature;
mod scaling;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::phys::{TrapConfig, HBAR, K_B};
use crate::trajectories::{MotionPlan, MotionProfile, PlanPurpose};

pub use budget::{heating_budget, misalignment_heating, BudgetInputs, HeatingBudget, ScalingLaw, TransportReference};
pub use quadrature::{initial_panels, QuadratureEstimate, REFINEMENT_TOLERANCE};
pub use scaling::{scaling_study, ScalingStudy, MIN_OMEGA_T};

/// Complex amplitude serialised as `{ "re": .., "im": .. }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Amplitude {
    fn from(c: Complex64) -> Self {
        Amplitude { re: c.re, im: c.im }
    }
}

impl From<Amplitude> for Complex64 {
    fn from(a: Amplitude) -> Self {
        Complex64::new(a.re, a.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatingResult {
    /// Mean phonon gain.
    pub delta_n: f64,
    /// `delta_n · ħω₀ / k_B`, Kelvin.
    pub delta_t: f64,
    /// `ã(ω₀)`, m/s.
    pub spectrum_at_omega0: Amplitude,
}

/// Normalised spectrum `∫ p''(s) e^{−iθs} ds` (closed form), conjugated for
/// negative θ since `p''` is real.
pub fn normalized_spectrum(profile: &MotionProfile, theta: f64) -> Complex64 {
    if theta < 0.0 {
        closed_form::normalized_spectrum(profile, -theta).conj()
    } else {
        closed_form::normalized_spectrum(profile, theta)
    }
}

/// Normalised spectrum by adaptive quadrature of `p''` plus the endpoint
/// impulses; independent of the closed-form expansions.
pub fn normalized_spectrum_quadrature(profile: &MotionProfile, theta: f64) -> Result<Complex64> {
    let smooth = quadrature::normalized_spectrum_quadrature(profile, theta.abs())?.value;
    let full = smooth + closed_form::impulsive_part(profile, theta.abs());
    Ok(if theta < 0.0 { full.conj() } else { full })
}

/// `ã(ω) = ∫₀^T a(t) e^{−iωt} dt`, closed form.
pub fn acceleration_spectrum(plan: &MotionPlan, omega: f64) -> Complex64 {
    let scale = plan.distance() / plan.duration();
    scale * normalized_spectrum(plan.profile(), omega * plan.duration())
}

/// `ã(ω)` by oscillation-aware composite quadrature.
pub fn acceleration_spectrum_quadrature(plan: &MotionPlan, omega: f64) -> Result<Complex64> {
    let scale = plan.distance() / plan.duration();
    Ok(scale * normalized_spectrum_quadrature(plan.profile(), omega * plan.duration())?)
}

fn gain_from_spectrum(a: Complex64, trap: &TrapConfig) -> HeatingResult {
    let w = trap.omega0();
    let denom = 2.0 * trap.zero_point_length() * w;
    let delta_n = a.norm_sqr() / (denom * denom);
    HeatingResult { delta_n, delta_t: delta_n * HBAR * w / K_B, spectrum_at_omega0: a.into() }
}

/// Mean phonon gain and equivalent temperature rise caused by `plan`.
pub fn delta_n(plan: &MotionPlan, trap: &TrapConfig) -> HeatingResult {
    gain_from_spectrum(acceleration_spectrum(plan, trap.omega0()), trap)
}

/// [`delta_n`] evaluated through the quadrature route.
pub fn delta_n_quadrature(plan: &MotionPlan, trap: &TrapConfig) -> Result<HeatingResult> {
    Ok(gain_from_spectrum(acceleration_spectrum_quadrature(plan, trap.omega0())?, trap))
}

/// Amplitude exchange between two traps whose centres are offset by
/// `delta_x`: the atom sees a trap centre moving as `λ(t)·δx`, which is a
/// transport plan over distance `δx` with the exchange ramp as profile.
pub fn misalignment_plan(exchange_profile: MotionProfile, delta_x: f64, duration: f64) -> Result<MotionPlan> {
    MotionPlan::new(exchange_profile, delta_x, duration, PlanPurpose::AmplitudeExchange)
}
