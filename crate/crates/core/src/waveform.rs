//! Sampled control waveforms for amplitude exchange and AOD sweeps.
//!
//! Both endpoints are sampled: `N` intervals give `N + 1` samples at
//! `t_j = j·T/N`. During an exchange the moving-trap amplitude follows the
//! profile and the static trap takes the complement, so the total depth is
//! constant at every sample.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trajectories::MotionProfile;

pub const MIN_INTERVALS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveformTable {
    /// Samples per second.
    pub sample_rate: f64,
    /// Seconds, including any hold tail.
    pub duration: f64,
    pub times: Vec<f64>,
    /// Fraction of the total depth in the moving trap.
    pub m_trap_amplitude: Vec<f64>,
    /// Fraction of the total depth in the static trap.
    pub s_trap_amplitude: Vec<f64>,
    /// AOD drive frequency, MHz.
    pub aod_frequency: Option<Vec<f64>>,
}

fn intervals(duration: f64, sample_rate: f64) -> Result<usize> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::param(format!("duration must be > 0, got {duration}")));
    }
    if !(sample_rate > 0.0 && sample_rate.is_finite()) {
        return Err(Error::param(format!("sample rate must be > 0, got {sample_rate}")));
    }
    let n = (duration * sample_rate).round();
    if n < MIN_INTERVALS as f64 {
        return Err(Error::param(format!(
            "{duration} s at {sample_rate} S/s gives {n} intervals; at least {MIN_INTERVALS} are required"
        )));
    }
    Ok(n as usize)
}

fn profile_samples(profile: &MotionProfile, n: usize) -> Vec<f64> {
    (0..=n).map(|j| profile.value(j as f64 / n as f64, 0).clamp(0.0, 1.0)).collect()
}

/// Moving-trap amplitude `λ(t/T)` and static-trap amplitude `1 − λ(t/T)`.
pub fn compile_amplitude_waveforms(
    exchange_profile: &MotionProfile,
    duration: f64,
    sample_rate: f64,
) -> Result<WaveformTable> {
    let n = intervals(duration, sample_rate)?;
    let m = profile_samples(exchange_profile, n);
    let s = m.iter().map(|m| 1.0 - m).collect();
    Ok(WaveformTable {
        sample_rate,
        duration,
        times: (0..=n).map(|j| duration * j as f64 / n as f64).collect(),
        m_trap_amplitude: m,
        s_trap_amplitude: s,
        aod_frequency: None,
    })
}

/// AOD frequency `f_start + (f_end − f_start)·profile(t/T)` with the atom
/// held entirely in the moving trap.
pub fn compile_frequency_sweep(
    profile: &MotionProfile,
    f_start: f64,
    f_end: f64,
    duration: f64,
    sample_rate: f64,
) -> Result<WaveformTable> {
    if !(f_start.is_finite() && f_end.is_finite()) {
        return Err(Error::param("sweep frequencies must be finite"));
    }
    let n = intervals(duration, sample_rate)?;
    let df = f_end - f_start;
    let f = profile_samples(profile, n).into_iter().map(|p| f_start + df * p).collect();
    Ok(WaveformTable {
        sample_rate,
        duration,
        times: (0..=n).map(|j| duration * j as f64 / n as f64).collect(),
        m_trap_amplitude: vec![1.0; n + 1],
        s_trap_amplitude: vec![0.0; n + 1],
        aod_frequency: Some(f),
    })
}

impl WaveformTable {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends a constant tail repeating the last sample for `hold` seconds.
    pub fn with_hold(mut self, hold: f64) -> Result<Self> {
        if !(hold >= 0.0 && hold.is_finite()) {
            return Err(Error::param(format!("hold must be >= 0, got {hold}")));
        }
        let extra = (hold * self.sample_rate).round() as usize;
        let t_end = self.duration;
        let dt = 1.0 / self.sample_rate;
        let last = self.len() - 1;
        for j in 1..=extra {
            self.times.push(t_end + dt * j as f64);
            self.m_trap_amplitude.push(self.m_trap_amplitude[last]);
            self.s_trap_amplitude.push(self.s_trap_amplitude[last]);
            if let Some(f) = &mut self.aod_frequency {
                f.push(f[last]);
            }
        }
        self.duration = t_end + dt * extra as f64;
        Ok(self)
    }

    /// Fails if any AOD frequency lies outside `[lo, hi]` MHz.
    pub fn check_band(&self, lo: f64, hi: f64) -> Result<()> {
        if let Some(f) = &self.aod_frequency {
            if let Some((j, v)) = f.iter().enumerate().find(|(_, v)| !(lo..=hi).contains(*v)) {
                return Err(Error::param(format!("sample {j}: {v} MHz is outside the band [{lo}, {hi}] MHz")));
            }
        }
        Ok(())
    }

    /// CSV with columns `t_s,m_amp,s_amp[,aod_f_mhz]`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t_s", "m_amp", "s_amp"];
        if self.aod_frequency.is_some() {
            header.push("aod_f_mhz");
        }
        w.write_record(&header)?;
        for j in 0..self.len() {
            let mut row = vec![
                self.times[j].to_string(),
                self.m_trap_amplitude[j].to_string(),
                self.s_trap_amplitude[j].to_string(),
            ];
            if let Some(f) = &self.aod_frequency {
                row.push(f[j].to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
