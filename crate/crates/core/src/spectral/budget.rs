//! Heating budget of an inter-site transfer: two amplitude exchanges, each
//! with a basic and a misalignment term, around one transport.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phys::{TrapConfig, K_B};

/// Asymptotic duration exponent of the transport heating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingLaw {
    /// Smoothstep of order `k`: `t^{−(2k+2)}`.
    Smoothstep(u32),
    /// Sinusoidal profile: `t^{−6}`.
    Sinusoidal,
}

impl ScalingLaw {
    pub fn exponent(self) -> f64 {
        match self {
            ScalingLaw::Smoothstep(k) => (2 * k + 2) as f64,
            ScalingLaw::Sinusoidal => 6.0,
        }
    }
}

/// Measured transport heating at a reference distance and duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportReference {
    /// Kelvin.
    pub delta_t_ref: f64,
    /// Meters.
    pub distance_ref: f64,
    /// Seconds.
    pub time_ref: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetInputs {
    /// Basic heating of both well-aligned exchanges together, Kelvin.
    pub basic_per_exchange: f64,
    pub alpha: f64,
    /// Meters.
    pub delta_x_start: f64,
    /// Meters.
    pub delta_x_target: f64,
    pub reference: TransportReference,
    /// Transport distance, meters.
    pub distance: f64,
    /// Transport duration, seconds.
    pub time: f64,
    pub law: ScalingLaw,
}

/// All terms in Kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatingBudget {
    pub basic_1: f64,
    pub mis_1: f64,
    pub transport: f64,
    pub basic_2: f64,
    pub mis_2: f64,
    pub total: f64,
    pub alpha: f64,
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite and >= 0, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// `½ α m ω₀² δx² / k_B`, Kelvin.
pub fn misalignment_heating(trap: &TrapConfig, alpha: f64, delta_x: f64) -> f64 {
    0.5 * alpha * trap.mass() * trap.omega0().powi(2) * delta_x * delta_x / K_B
}

pub fn heating_budget(trap: &TrapConfig, inputs: &BudgetInputs) -> Result<HeatingBudget> {
    let r = &inputs.reference;
    positive("reference distance", r.distance_ref)?;
    positive("reference time", r.time_ref)?;
    positive("transport time", inputs.time)?;
    non_negative("reference heating", r.delta_t_ref)?;
    non_negative("distance", inputs.distance)?;
    non_negative("basic heating", inputs.basic_per_exchange)?;
    non_negative("alpha", inputs.alpha)?;
    non_negative("start mismatch", inputs.delta_x_start)?;
    non_negative("target mismatch", inputs.delta_x_target)?;

    let d_ratio = inputs.distance / r.distance_ref;
    let transport = r.delta_t_ref * d_ratio * d_ratio * (r.time_ref / inputs.time).powf(inputs.law.exponent());
    let basic = 0.5 * inputs.basic_per_exchange;
    let mis_1 = misalignment_heating(trap, inputs.alpha, inputs.delta_x_start);
    let mis_2 = misalignment_heating(trap, inputs.alpha, inputs.delta_x_target);
    let total = basic + mis_1 + transport + basic + mis_2;
    Ok(HeatingBudget { basic_1: basic, mis_1, transport, basic_2: basic, mis_2, total, alpha: inputs.alpha })
}
