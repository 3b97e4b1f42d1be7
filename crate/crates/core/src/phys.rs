//! Physical constants, the harmonic trap and thermal bookkeeping.
//!
//! Everything is SI internally. Trap depth and temperatures are stored in
//! Kelvin (energy divided by the Boltzmann constant); the micro-Kelvin helpers
//! exist for the file and command-line interfaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Mass of a ⁸⁷Rb atom, kg.
pub const MASS_RB87: f64 = 1.443_160_60e-25;

pub const MICRO_KELVIN: f64 = 1e-6;

#[inline]
pub fn uk_to_k(t_uk: f64) -> f64 {
    t_uk / 1e6
}

#[inline]
pub fn k_to_uk(t_k: f64) -> f64 {
    t_k * 1e6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Species {
    #[serde(rename = "Rb87")]
    Rb87,
}

impl Species {
    pub fn mass(self) -> f64 {
        match self {
            Species::Rb87 => MASS_RB87,
        }
    }
}

impl std::str::FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Rb87" | "rb87" | "87Rb" => Ok(Species::Rb87),
            other => Err(Error::Config(format!("unknown species {other:?}"))),
        }
    }
}

/// A harmonic trap: angular frequency, depth (as a temperature) and the mass
/// of the trapped atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    omega0: f64,
    depth_u0: f64,
    mass: f64,
}

impl TrapConfig {
    pub fn new(omega0: f64, depth_u0: f64, mass: f64) -> Result<Self> {
        for (name, v) in [("omega0", omega0), ("depth_u0", depth_u0), ("mass", mass)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        let trap = TrapConfig { omega0, depth_u0, mass };
        let x = trap.zero_point_length();
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain("zero-point length is not finite"));
        }
        Ok(trap)
    }

    /// ⁸⁷Rb trap whose angular frequency is chosen so that the 2D radial
    /// ground-state fraction at `temperature` equals `fraction`.
    pub fn rb87_calibrated(temperature: f64, fraction: f64, depth_u0: f64) -> Result<Self> {
        let omega0 = calibrate_omega(temperature, fraction)?;
        TrapConfig::new(omega0, depth_u0, MASS_RB87)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn depth_u0(&self) -> f64 {
        self.depth_u0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn zero_point_length(&self) -> f64 {
        zero_point_length(self)
    }

    /// ħω₀/k_B, the phonon energy expressed as a temperature.
    pub fn phonon_temperature(&self) -> f64 {
        HBAR * self.omega0 / K_B
    }
}

/// Temperature of a thermal motional state, Kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalState {
    temperature: f64,
}

impl ThermalState {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::domain(format!("temperature must be finite and >= 0, got {temperature}")));
        }
        Ok(ThermalState { temperature })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn heated(&self, delta_t: f64) -> Result<Self> {
        ThermalState::new(self.temperature + delta_t)
    }
}

/// Zero-point fluctuation length `sqrt(ħ / (2 m ω₀))`, meters.
pub fn zero_point_length(trap: &TrapConfig) -> f64 {
    (HBAR / (2.0 * trap.mass * trap.omega0)).sqrt()
}

/// Thermal occupation of the ground state of two independent radial
/// harmonic dimensions: `(1 - exp(-ħω₀ / k_B T))²`.
pub fn gs_fraction_2d(state: &ThermalState, trap: &TrapConfig) -> f64 {
    gs_fraction_2d_raw(state.temperature, trap.omega0)
}

pub(crate) fn gs_fraction_2d_raw(temperature: f64, omega0: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let x = HBAR * omega0 / (K_B * temperature);
    let one_dim = -(-x).exp_m1();
    one_dim * one_dim
}

/// Drop of the 2D ground-state fraction when `state` is heated by
/// `delta_t` Kelvin.
pub fn gs_fraction_reduction(state: &ThermalState, trap: &TrapConfig, delta_t: f64) -> Result<f64> {
    let heated = state.heated(delta_t)?;
    Ok(gs_fraction_2d(state, trap) - gs_fraction_2d(&heated, trap))
}

/// Inverse of [`gs_fraction_2d`] in ω₀: the angular frequency at which a
/// thermal state at `temperature` has the requested 2D ground-state fraction.
pub fn calibrate_omega(temperature: f64, target_fraction: f64) -> Result<f64> {
    if !(target_fraction > 0.0 && target_fraction < 1.0) {
        return Err(Error::domain(format!("target fraction must lie in (0, 1), got {target_fraction}")));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::domain(format!("temperature must be > 0, got {temperature}")));
    }
    // (1 - e^{-x})² = f  =>  x = -ln(1 - sqrt f)
    let x = -(-target_fraction.sqrt()).ln_1p();
    Ok(x * K_B * temperature / HBAR)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rb_trap(omega0: f64) -> TrapConfig {
        TrapConfig::new(omega0, 1e-3, MASS_RB87).unwrap()
    }

    /// Bisection on the monotone map ω ↦ gs_fraction, kept independent of the
    /// closed-form inverse.
    fn bisect_omega(temperature: f64, target: f64) -> f64 {
        let (mut lo, mut hi) = (1.0_f64, 1e9_f64);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if gs_fraction_2d_raw(temperature, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn zero_point_length_rb87_100khz() {
        let omega = 2.0 * std::f64::consts::PI * 100e3;
        let x = zero_point_length(&rb_trap(omega));
        // hand evaluation: 1.054571817e-34 / (2 * 1.4431606e-25 * 6.283185307e5)
        let by_hand = (5.815_025_6e-16_f64).sqrt();
        assert_relative_eq!(x, by_hand, max_relative = 1e-6);
        assert_relative_eq!(x, 2.41e-8, max_relative = 2e-3);
    }

    #[test]
    fn zero_point_length_square_root_scaling() {
        let t = rb_trap(1e6);
        let t4 = rb_trap(4e6);
        assert_relative_eq!(zero_point_length(&t4), 0.5 * zero_point_length(&t), max_relative = 1e-15);
        let heavy = TrapConfig::new(1e6, 1e-3, 4.0 * MASS_RB87).unwrap();
        assert_relative_eq!(zero_point_length(&heavy), 0.5 * zero_point_length(&t), max_relative = 1e-15);
    }

    #[test]
    fn trap_rejects_non_positive_fields() {
        assert!(TrapConfig::new(0.0, 1e-3, MASS_RB87).is_err());
        assert!(TrapConfig::new(1e6, -1.0, MASS_RB87).is_err());
        assert!(TrapConfig::new(1e6, 1e-3, f64::NAN).is_err());
        assert!(ThermalState::new(-1e-9).is_err());
    }

    #[test]
    fn gs_fraction_limits() {
        let trap = rb_trap(1e6);
        assert_eq!(gs_fraction_2d(&ThermalState::new(0.0).unwrap(), &trap), 1.0);
        let hot = gs_fraction_2d(&ThermalState::new(1e3).unwrap(), &trap);
        assert!(hot < 1e-12);
    }

    #[test]
    fn calibration_against_bisection() {
        let t = uk_to_k(15.0);
        let omega = calibrate_omega(t, 0.130).unwrap();
        let oracle = bisect_omega(t, 0.130);
        assert_relative_eq!(omega, oracle, max_relative = 1e-12);
        let phonon_uk = k_to_uk(HBAR * omega / K_B);
        assert!((phonon_uk - 6.71).abs() < 0.01, "ħω/k_B = {phonon_uk} μK");
    }

    #[test]
    fn calibration_round_trip_and_reduction() {
        let trap = TrapConfig::rb87_calibrated(uk_to_k(15.0), 0.130, 1e-3).unwrap();
        let f0 = gs_fraction_2d(&ThermalState::new(uk_to_k(15.0)).unwrap(), &trap);
        assert!((f0 - 0.130).abs() < 1e-10);
        let f1 = gs_fraction_2d(&ThermalState::new(uk_to_k(15.156)).unwrap(), &trap);
        // independent scalar evaluation of (1 - e^{-x})² with x = 6.7073/15.156
        let x = k_to_uk(trap.phonon_temperature()) / 15.156;
        let scalar = (1.0 - (-x).exp()).powi(2);
        assert_relative_eq!(f1, scalar, max_relative = 1e-12);
        assert!((f1 - 0.1279).abs() < 2e-4, "{f1}");
    }

    #[test]
    fn reductions_for_measured_heating() {
        let trap = TrapConfig::rb87_calibrated(uk_to_k(15.0), 0.130, 1e-3).unwrap();
        let s = ThermalState::new(uk_to_k(15.0)).unwrap();
        let small = gs_fraction_reduction(&s, &trap, uk_to_k(0.156)).unwrap();
        let large = gs_fraction_reduction(&s, &trap, uk_to_k(0.783)).unwrap();
        assert!((small - 0.002).abs() <= 0.0005, "{small}");
        assert!((large - 0.010).abs() <= 0.001, "{large}");
    }

    #[test]
    fn gs_fraction_monotone_by_sampling() {
        let mut prev = 1.0;
        for i in 1..200 {
            let f = gs_fraction_2d_raw(uk_to_k(i as f64), 1e6);
            assert!(f < prev);
            prev = f;
        }
        let mut prev = 0.0;
        for i in 1..200 {
            let f = gs_fraction_2d_raw(uk_to_k(15.0), 1e4 * i as f64);
            assert!(f > prev);
            prev = f;
        }
    }

    #[test]
    fn calibrate_inverts_on_omega() {
        for w in [1e4, 3e5, 8.8e5, 5e6] {
            let t = uk_to_k(15.0);
            let back = calibrate_omega(t, gs_fraction_2d_raw(t, w)).unwrap();
            assert_relative_eq!(back, w, max_relative = 1e-10);
        }
    }

    #[test]
    fn calibration_domain_errors() {
        assert!(calibrate_omega(1e-5, 0.0).is_err());
        assert!(calibrate_omega(1e-5, 1.0).is_err());
        assert!(calibrate_omega(0.0, 0.5).is_err());
    }

    #[test]
    fn doubling_temperature_doubles_omega() {
        let a = calibrate_omega(1e-5, 0.3).unwrap();
        let b = calibrate_omega(2e-5, 0.3).unwrap();
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-14);
    }

    #[test]
    fn species_parse() {
        assert_eq!("Rb87".parse::<Species>().unwrap(), Species::Rb87);
        assert!("Cs133".parse::<Species>().is_err());
    }
}
