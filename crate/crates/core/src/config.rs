//! Run configuration files (TOML).
//!
//! ```toml
//! profile = "smoothstep:3"
//! distance_um = 5.6
//! duration_us = 100
//! seed = 7
//! samples = 10000
//!
//! [trap]
//! depth_uK = 1000
//! species = "Rb87"
//! gs_calibration = { T_uK = 15, fraction = 0.13 }   # or: omega0_hz = 140e3
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::phys::{uk_to_k, Species, TrapConfig};
use crate::trajectories::MotionProfile;

/// Temperature / ground-state-fraction pair used to calibrate ω₀ when none
/// is given.
pub const DEFAULT_GS_CALIBRATION: GsCalibration = GsCalibration { t_uk: 15.0, fraction: 0.130 };
pub const DEFAULT_DEPTH_UK: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsCalibration {
    #[serde(rename = "T_uK")]
    pub t_uk: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TrapSection {
    /// Ordinary frequency, Hz.
    pub omega0_hz: Option<f64>,
    pub gs_calibration: Option<GsCalibration>,
    #[serde(rename = "depth_uK")]
    pub depth_uk: Option<f64>,
    pub species: Option<String>,
}

impl TrapSection {
    pub fn build(&self) -> Result<TrapConfig> {
        let species: Species = match &self.species {
            Some(s) => s.parse()?,
            None => Species::Rb87,
        };
        let depth = uk_to_k(self.depth_uk.unwrap_or(DEFAULT_DEPTH_UK));
        let omega0 = match (self.omega0_hz, self.gs_calibration) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("trap: give either omega0_hz or gs_calibration, not both".into()))
            }
            (Some(f), None) => 2.0 * std::f64::consts::PI * f,
            (None, cal) => {
                let c = cal.unwrap_or(DEFAULT_GS_CALIBRATION);
                crate::phys::calibrate_omega(uk_to_k(c.t_uk), c.fraction)?
            }
        };
        TrapConfig::new(omega0, depth, species.mass())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub trap: TrapSection,
    pub profile: Option<MotionProfile>,
    pub distance_um: Option<f64>,
    pub duration_us: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    /// Schema checks that do not need any computation.
    pub fn validate(&self) -> Result<()> {
        self.trap.build()?;
        for (name, v) in [("distance_um", self.distance_um), ("duration_us", self.duration_us)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} must be finite and >= 0, got {v}")));
                }
            }
        }
        if self.duration_us == Some(0.0) {
            return Err(Error::Config("duration_us must be > 0".into()));
        }
        if self.samples == Some(0) {
            return Err(Error::Config("samples must be >= 1".into()));
        }
        Ok(())
    }
}
