//! Brute-force checks of the spectral predictions and the survival law:
//! direct integration of the driven oscillator, thermal ensembles and a
//! Monte-Carlo survival simulation.

mod driven;
mod ensemble;
mod survival_mc;

use serde::{Deserialize, Serialize};

use crate::phys::TrapConfig;

pub use driven::{simulate_driven, simulate_driven_with, IntegratorOptions};
pub use ensemble::{thermal_ensemble_heating, EnsembleResult, MIN_ENSEMBLE_SAMPLES};
pub use survival_mc::{monte_carlo_survival, monte_carlo_survival_model, SurvivalPoint, MIN_SURVIVAL_SAMPLES};

/// Atom position and velocity in the lab frame, with the motional energy
/// relative to the trap centre at the time the state refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    /// Meters.
    pub position: f64,
    /// m/s.
    pub velocity: f64,
    /// Joules.
    pub energy: f64,
}

impl SimState {
    pub fn new(position: f64, velocity: f64, trap: &TrapConfig, trap_center: f64) -> Self {
        SimState { position, velocity, energy: energy(trap, position - trap_center, velocity) }
    }

    /// At rest at the trap centre.
    pub fn at_rest(trap: &TrapConfig, trap_center: f64) -> Self {
        SimState::new(trap_center, 0.0, trap, trap_center)
    }
}

pub(crate) fn energy(trap: &TrapConfig, offset: f64, velocity: f64) -> f64 {
    let w = trap.omega0();
    0.5 * trap.mass() * (velocity * velocity + w * w * offset * offset)
}
