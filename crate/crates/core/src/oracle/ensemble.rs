//! Phase-averaged heating of a thermal ensemble.

use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_driven_with, IntegratorOptions, SimState};
use crate::error::{Error, Result};
use crate::phys::{TrapConfig, K_B};
use crate::rng;
use crate::trajectories::MotionPlan;

pub const MIN_ENSEMBLE_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    /// Joules.
    pub mean_energy_gain: f64,
    /// Joules.
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Mean energy gain of atoms drawn from the thermal state of the static trap
/// at `temperature` (Kelvin), each propagated through `plan`.
pub fn thermal_ensemble_heating(
    plan: &MotionPlan,
    trap: &TrapConfig,
    temperature: f64,
    samples: usize,
    seed: u64,
) -> Result<EnsembleResult> {
    if samples < MIN_ENSEMBLE_SAMPLES {
        return Err(Error::param(format!("need at least {MIN_ENSEMBLE_SAMPLES} samples, got {samples}")));
    }
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::domain(format!("temperature must be >= 0, got {temperature}")));
    }
    if plan.distance() == 0.0 {
        // a static harmonic trap conserves energy exactly
        return Ok(EnsembleResult { mean_energy_gain: 0.0, std_error: 0.0, samples, seed });
    }
    let w = trap.omega0();
    let sigma_v = (K_B * temperature / trap.mass()).sqrt();
    let sigma_x = sigma_v / w;
    let x0 = plan.position(0.0);
    let gains: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let (x, v) = if temperature > 0.0 {
                let nx = Normal::new(0.0, sigma_x).expect("finite width");
                let nv = Normal::new(0.0, sigma_v).expect("finite width");
                (nx.sample(&mut r), nv.sample(&mut r))
            } else {
                (0.0, 0.0)
            };
            let start = SimState::new(x0 + x, v, trap, x0);
            let end = simulate_driven_with(plan, trap, start, IntegratorOptions::default())?;
            Ok(end.energy - start.energy)
        })
        .collect::<Result<_>>()?;
    let n = gains.len() as f64;
    let mean = gains.iter().sum::<f64>() / n;
    let var = gains.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(EnsembleResult { mean_energy_gain: mean, std_error: (var / n).sqrt(), samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phys::{uk_to_k, HBAR};
    use crate::spectral::delta_n;
    use crate::trajectories::{smoothstep_profile, PlanPurpose};

    fn trap() -> TrapConfig {
        TrapConfig::rb87_calibrated(uk_to_k(15.0), 0.13, 1e-3).unwrap()
    }

    #[test]
    fn zero_distance_is_exactly_zero() {
        let plan = MotionPlan::new(smoothstep_profile(3).unwrap(), 0.0, 10e-6, PlanPurpose::Transport).unwrap();
        let r = thermal_ensemble_heating(&plan, &trap(), uk_to_k(15.0), 100, 1).unwrap();
        assert_eq!(r.mean_energy_gain, 0.0);
    }

    #[test]
    fn reproducible_and_temperature_independent() {
        let t = trap();
        let plan = MotionPlan::new(smoothstep_profile(1).unwrap(), 1e-6, 10e-6, PlanPurpose::Transport).unwrap();
        let cold = thermal_ensemble_heating(&plan, &t, 0.0, 100, 5).unwrap();
        let hot = thermal_ensemble_heating(&plan, &t, uk_to_k(15.0), 400, 5).unwrap();
        let again = thermal_ensemble_heating(&plan, &t, uk_to_k(15.0), 400, 5).unwrap();
        assert_eq!(hot, again);
        let expect = delta_n(&plan, &t).delta_n * HBAR * t.omega0();
        assert!((cold.mean_energy_gain - expect).abs() <= 1e-6 * expect);
        assert!((hot.mean_energy_gain - cold.mean_energy_gain).abs() <= 3.0 * hot.std_error);
    }

    #[test]
    fn too_few_samples() {
        let plan = MotionPlan::new(smoothstep_profile(1).unwrap(), 1e-6, 10e-6, PlanPurpose::Transport).unwrap();
        assert!(matches!(thermal_ensemble_heating(&plan, &trap(), 0.0, 99, 0), Err(Error::Parameter(_))));
    }
}
