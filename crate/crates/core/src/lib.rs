//! Simulation, inference and waveform compilation for atom shuttling in
//! optical-tweezer arrays.
//!
//! The crate is organised bottom-up:
//!
//! - [`phys`]: constants, trap configuration and thermal bookkeeping.
//! - [`trajectories`]: dimensionless motion profiles and physical plans.
//! - [`spectral`]: acceleration spectra, phonon gain, scaling laws and the
//!   inter-site heating budget.
//! - [`oracle`]: brute-force classical integration and Monte-Carlo survival.
//! - [`inference`]: survival-model, power-law, regression and peak fits.
//! - [`waveform`]: sampled control waveforms.
//! - [`config`], [`io`] and [`cli`]: the `shuttle-sim` front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod inference;
pub mod io;
pub mod oracle;
pub mod phys;
pub mod rng;
pub mod spectral;
pub mod trajectories;
pub mod waveform;

pub use error::{Error, Result};
pub use phys::{gs_fraction_reduction, Species, ThermalState, TrapConfig};
pub use trajectories::{MotionPlan, MotionProfile, PlanPurpose};
