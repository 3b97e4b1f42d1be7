//! `shuttle-sim` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage, validation or I/O errors, 2 on
//! numerical failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{GsCalibration, RunConfig};
use crate::error::{Error, Result};
use crate::inference::{
    self, fit_fidelity_decay, fit_gaussian2d, fit_mis_linear, fit_power_law, fit_power_law_fixed_p, fit_survival,
    CalibrationScan, DataPoint, FitResult, PowerLawContext, ScanPoint, MHZ_PER_UM,
};
use crate::io::{emit, read_csv, to_sorted_json};
use crate::oracle::{monte_carlo_survival_model, thermal_ensemble_heating};
use crate::phys::{k_to_uk, uk_to_k, TrapConfig, HBAR};
use crate::spectral::{self, heating_budget, scaling_study, BudgetInputs, ScalingLaw, TransportReference};
use crate::trajectories::{MotionPlan, MotionProfile, PlanPurpose};
use crate::waveform::{compile_amplitude_waveforms, compile_frequency_sweep};
use crate::{inference::SurvivalModel, rng};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SHUTTLE_SIM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "shuttle-sim", version, about = "Atom transport heating, survival and calibration toolkit")]
pub struct Cli {
    /// TOML run configuration; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output file, written atomically. Defaults to stdout.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct TrapArgs {
    /// Radial trap frequency in Hz (ordinary, not angular).
    #[arg(long)]
    omega0_hz: Option<f64>,
    /// Calibrate ω₀ from a temperature (μK) ...
    #[arg(long, requires = "gs_fraction")]
    gs_temp_uk: Option<f64>,
    /// ... and the 2D ground-state fraction at that temperature.
    #[arg(long, requires = "gs_temp_uk")]
    gs_fraction: Option<f64>,
    /// Trap depth in μK.
    #[arg(long)]
    depth_uk: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct PlanArgs {
    /// `smoothstep:k` or `sinusoidal`.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    distance_um: Option<f64>,
    #[arg(long)]
    duration_us: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McMode {
    Survival,
    Ensemble,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WaveKind {
    Amplitude,
    Sweep,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a profile and its derivatives on [0, 1].
    Traj {
        #[arg(long)]
        profile: Option<String>,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
    },
    /// Phonon gain of a transport plan.
    Heat {
        #[command(flatten)]
        trap: TrapArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Also evaluate the spectrum by quadrature and report the agreement.
        #[arg(long)]
        check: bool,
    },
    /// Fit the envelope exponent of ΔN(t).
    ScalingStudy {
        #[command(flatten)]
        trap: TrapArgs,
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        distance_um: Option<f64>,
        #[arg(long, default_value_t = 50.0)]
        omega_t_min: f64,
        #[arg(long, default_value_t = 5000.0)]
        omega_t_max: f64,
        /// Number of log-spaced reporting times.
        #[arg(long, default_value_t = 12)]
        points: usize,
    },
    /// Oracle simulations: Monte-Carlo survival or thermal-ensemble heating.
    Mc {
        #[arg(long, value_enum, default_value_t = McMode::Survival)]
        mode: McMode,
        #[command(flatten)]
        trap: TrapArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value_t = 0.98)]
        p0: f64,
        #[arg(long, default_value_t = 15.0)]
        t0_uk: f64,
        /// Heating per cycle in μK; derived from the plan when omitted.
        #[arg(long)]
        delta_t_uk: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        cycles: u64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Ensemble temperature in μK.
        #[arg(long, default_value_t = 15.0)]
        temperature_uk: f64,
    },
    /// Fit P₀ and ΔT of the survival law (CSV `n,survival,trials`).
    FitSurvival {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 15.0)]
        t0_uk: f64,
        #[arg(long, default_value_t = 1000.0)]
        u0_uk: f64,
    },
    /// Fit ΔT = A·(t/100 μs)^−p (CSV `t_us,survival,trials`).
    FitScaling {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 51)]
        segments: u32,
        #[arg(long, default_value_t = 15.0)]
        t0_uk: f64,
        #[arg(long, default_value_t = 1000.0)]
        u0_uk: f64,
        #[arg(long, default_value_t = 0.98)]
        p0: f64,
        /// Hold the exponent fixed and fit only A.
        #[arg(long)]
        fixed_p: Option<f64>,
    },
    /// Linear fit of heating against δ² (CSV `delta_sq_nm2,delta_t_uK`).
    FitMis {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        trap: TrapArgs,
        #[arg(long, default_value_t = inference::DEFAULT_BASIC_TOTAL_UK)]
        basic_uk: f64,
    },
    /// 2D Gaussian trap-centre fit (CSV `fx_mhz,fy_mhz,survival,trials`).
    FitGaussian {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exponential fidelity decay (CSV `n,fidelity,stderr`).
    FitFidelity {
        #[arg(long)]
        input: PathBuf,
    },
    /// Inter-site heating budget; defaults describe the parallel transfer.
    Budget {
        #[command(flatten)]
        trap: TrapArgs,
        #[arg(long, default_value_t = 0.156)]
        basic_uk: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        dx_start_nm: f64,
        #[arg(long, default_value_t = 0.0)]
        dx_target_nm: f64,
        #[arg(long, default_value_t = 0.627)]
        ref_dt_uk: f64,
        #[arg(long, default_value_t = 5.6)]
        ref_distance_um: f64,
        #[arg(long, default_value_t = 100.0)]
        ref_time_us: f64,
        #[arg(long, default_value_t = 20.0)]
        distance_um: f64,
        #[arg(long, default_value_t = 130.0)]
        time_us: f64,
        /// `smoothstep:k` or `sinusoidal`.
        #[arg(long, default_value = "smoothstep:3")]
        law: String,
    },
    /// Compile amplitude-exchange or AOD-sweep waveforms to CSV.
    Waveform {
        #[arg(long, value_enum, default_value_t = WaveKind::Amplitude)]
        kind: WaveKind,
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        duration_us: Option<f64>,
        /// Samples per second.
        #[arg(long)]
        sample_rate: f64,
        #[arg(long)]
        f_start_mhz: Option<f64>,
        #[arg(long)]
        f_end_mhz: Option<f64>,
        /// Constant tail after the ramp, μs.
        #[arg(long, default_value_t = 0.0)]
        hold_us: f64,
        #[arg(long, requires = "band_max_mhz")]
        band_min_mhz: Option<f64>,
        #[arg(long, requires = "band_min_mhz")]
        band_max_mhz: Option<f64>,
        /// Refuse to compile if the predicted heating exceeds this (μK).
        #[arg(long)]
        max_heating_uk: Option<f64>,
        /// Trap mismatch assumed by the heating check for exchanges, nm.
        #[arg(long, default_value_t = 0.0)]
        mismatch_nm: f64,
        #[command(flatten)]
        trap: TrapArgs,
    },
}

struct Ctx {
    config: RunConfig,
    output: Option<PathBuf>,
}

impl Ctx {
    fn trap(&self, args: &TrapArgs) -> Result<TrapConfig> {
        let mut section = self.config.trap.clone();
        if let Some(f) = args.omega0_hz {
            section.omega0_hz = Some(f);
            section.gs_calibration = None;
        }
        if let (Some(t), Some(f)) = (args.gs_temp_uk, args.gs_fraction) {
            section.gs_calibration = Some(GsCalibration { t_uk: t, fraction: f });
            section.omega0_hz = None;
        }
        if let Some(d) = args.depth_uk {
            section.depth_uk = Some(d);
        }
        section.build()
    }

    fn profile(&self, arg: &Option<String>) -> Result<MotionProfile> {
        match arg {
            Some(s) => s.parse(),
            None => self
                .config
                .profile
                .clone()
                .ok_or_else(|| Error::Config("no profile given (flag --profile or config key `profile`)".into())),
        }
    }

    fn plan(&self, args: &PlanArgs) -> Result<MotionPlan> {
        let profile = self.profile(&args.profile)?;
        let d = args
            .distance_um
            .or(self.config.distance_um)
            .ok_or_else(|| Error::Config("no distance given (--distance-um or `distance_um`)".into()))?;
        let t = args
            .duration_us
            .or(self.config.duration_us)
            .ok_or_else(|| Error::Config("no duration given (--duration-us or `duration_us`)".into()))?;
        MotionPlan::new(profile, d / 1e6, t / 1e6, PlanPurpose::Transport)
    }

    fn emit_json(&self, value: &Value) -> Result<()> {
        emit(self.output.as_deref(), to_sorted_json(value)?.as_bytes())
    }

    fn emit_bytes(&self, bytes: &[u8]) -> Result<()> {
        emit(self.output.as_deref(), bytes)
    }
}

fn fit_json(fit: &FitResult, extra: Value) -> Result<Value> {
    let mut v = serde_json::to_value(fit)?;
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    Ok(v)
}

fn parse_law(s: &str) -> Result<ScalingLaw> {
    match s.parse::<MotionProfile>()? {
        MotionProfile::Sinusoidal => Ok(ScalingLaw::Sinusoidal),
        MotionProfile::Smoothstep(p) => Ok(ScalingLaw::Smoothstep(p.order())),
    }
}

fn trap_json(trap: &TrapConfig) -> Value {
    json!({
        "omega0_rad_s": trap.omega0(),
        "depth_uK": k_to_uk(trap.depth_u0()),
        "mass_kg": trap.mass(),
        "phonon_temperature_uK": k_to_uk(trap.phonon_temperature()),
    })
}

#[derive(Deserialize)]
struct CycleRow {
    n: f64,
    survival: f64,
    trials: u64,
}

#[derive(Deserialize)]
struct TimeRow {
    t_us: f64,
    survival: f64,
    trials: u64,
}

#[derive(Deserialize)]
struct MisRow {
    delta_sq_nm2: f64,
    #[serde(rename = "delta_t_uK")]
    delta_t_uk: f64,
}

#[derive(Deserialize)]
struct FidelityRow {
    n: f64,
    fidelity: f64,
    stderr: f64,
}

fn weighted(x: f64, y: f64, trials: u64) -> DataPoint {
    if trials > 0 {
        DataPoint::binomial(x, y, trials)
    } else {
        DataPoint::new(x, y, None)
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Ctx { config, output: cli.output };
    match cli.command {
        Command::Traj { profile, samples, max_order } => {
            let p = ctx.profile(&profile)?;
            if samples < 2 {
                return Err(Error::param("--samples must be >= 2"));
            }
            if max_order > 6 {
                return Err(Error::param("--max-order must be <= 6"));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["s".to_string(), "value".to_string()];
            header.extend((1..=max_order).map(|r| format!("d{r}")));
            w.write_record(&header)?;
            for j in 0..samples {
                let s = if j + 1 == samples { 1.0 } else { j as f64 / (samples - 1) as f64 };
                let mut row = vec![s.to_string()];
                row.extend((0..=max_order).map(|r| p.value(s, r).to_string()));
                w.write_record(&row)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            ctx.emit_bytes(&bytes)
        }
        Command::Heat { trap, plan, check } => {
            let trap = ctx.trap(&trap)?;
            let plan = ctx.plan(&plan)?;
            let h = spectral::delta_n(&plan, &trap);
            let mut v = json!({
                "profile": plan.profile().to_string(),
                "distance_um": plan.distance() * 1e6,
                "duration_us": plan.duration() * 1e6,
                "omega0_T": trap.omega0() * plan.duration(),
                "trap": trap_json(&trap),
                "delta_n": h.delta_n,
                "delta_t_uK": k_to_uk(h.delta_t),
                "spectrum_at_omega0": h.spectrum_at_omega0,
            });
            if check {
                let q = spectral::delta_n_quadrature(&plan, &trap)?;
                let a: num_complex::Complex64 = h.spectrum_at_omega0.into();
                let b: num_complex::Complex64 = q.spectrum_at_omega0.into();
                v["quadrature"] = json!({
                    "delta_n": q.delta_n,
                    "spectrum_at_omega0": q.spectrum_at_omega0,
                    "relative_difference": (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE),
                });
            }
            ctx.emit_json(&v)
        }
        Command::ScalingStudy { trap, profile, distance_um, omega_t_min, omega_t_max, points } => {
            let trap = ctx.trap(&trap)?;
            let p = ctx.profile(&profile)?;
            let d = distance_um.or(ctx.config.distance_um).unwrap_or(1.0) / 1e6;
            if points < 2 || !(omega_t_max > omega_t_min && omega_t_min > 0.0) {
                return Err(Error::param("need --points >= 2 and 0 < --omega-t-min < --omega-t-max"));
            }
            let times: Vec<f64> = (0..points)
                .map(|i| {
                    let f = i as f64 / (points - 1) as f64;
                    (omega_t_min.ln() + f * (omega_t_max / omega_t_min).ln()).exp() / trap.omega0()
                })
                .collect();
            let s = scaling_study(&p, &trap, d, &times)?;
            let samples: Vec<Value> = s.samples.iter().map(|(t, n)| json!({"t_us": t * 1e6, "delta_n": n})).collect();
            ctx.emit_json(&json!({
                "profile": p.to_string(),
                "distance_um": d * 1e6,
                "trap": trap_json(&trap),
                "exponent": s.exponent,
                "exponent_stderr": s.exponent_stderr,
                "envelope_maxima": s.envelope.len(),
                "samples": samples,
            }))
        }
        Command::Mc { mode, trap, plan, p0, t0_uk, delta_t_uk, cycles, samples, seed, temperature_uk } => {
            let trap = ctx.trap(&trap)?;
            let seed = seed.or(ctx.config.seed).unwrap_or(0);
            match mode {
                McMode::Survival => {
                    let samples = samples.or(ctx.config.samples).unwrap_or(100_000);
                    let dt = match delta_t_uk {
                        Some(v) => uk_to_k(v),
                        None => spectral::delta_n(&ctx.plan(&plan)?, &trap).delta_t,
                    };
                    let model = SurvivalModel::new(p0, uk_to_k(t0_uk), dt, trap.depth_u0())?;
                    let curve = monte_carlo_survival_model(&model, cycles, samples, seed)?;
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["cycle", "survival", "stderr"])?;
                    for p in &curve {
                        w.write_record([p.cycle.to_string(), p.survival.to_string(), p.stderr.to_string()])?;
                    }
                    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                    ctx.emit_bytes(&bytes)?;
                    let meta = json!({
                        "generator": rng::GENERATOR,
                        "seed": seed,
                        "samples": samples,
                        "p0": p0,
                        "t0_uK": t0_uk,
                        "delta_t_uK": k_to_uk(dt),
                        "u0_uK": k_to_uk(trap.depth_u0()),
                    });
                    write_meta(ctx.output.as_deref(), &meta)
                }
                McMode::Ensemble => {
                    let samples = samples.or(ctx.config.samples).unwrap_or(1000);
                    let plan = ctx.plan(&plan)?;
                    let r = thermal_ensemble_heating(&plan, &trap, uk_to_k(temperature_uk), samples, seed)?;
                    let predicted = spectral::delta_n(&plan, &trap).delta_n * HBAR * trap.omega0();
                    ctx.emit_json(&json!({
                        "generator": rng::GENERATOR,
                        "seed": r.seed,
                        "samples": r.samples,
                        "temperature_uK": temperature_uk,
                        "mean_energy_gain_J": r.mean_energy_gain,
                        "std_error_J": r.std_error,
                        "spectral_prediction_J": predicted,
                    }))
                }
            }
        }
        Command::FitSurvival { input, t0_uk, u0_uk } => {
            let rows: Vec<CycleRow> = read_csv(&input)?;
            let pts: Vec<_> = rows.iter().map(|r| weighted(r.n, r.survival, r.trials)).collect();
            let (fit, model) = fit_survival(&pts, uk_to_k(t0_uk), uk_to_k(u0_uk))?;
            ctx.emit_json(&fit_json(
                &fit,
                json!({
                    "fixed": {"t0_uK": k_to_uk(model.t0()), "u0_uK": k_to_uk(model.u0())},
                }),
            )?)
        }
        Command::FitScaling { input, segments, t0_uk, u0_uk, p0, fixed_p } => {
            let rows: Vec<TimeRow> = read_csv(&input)?;
            let pts: Vec<_> = rows.iter().map(|r| weighted(r.t_us / 1e6, r.survival, r.trials)).collect();
            let pc = PowerLawContext { segments, t0: uk_to_k(t0_uk), u0: uk_to_k(u0_uk), p0 };
            let fit = match fixed_p {
                Some(p) => fit_power_law_fixed_p(&pts, &pc, p)?,
                None => fit_power_law(&pts, &pc)?,
            };
            ctx.emit_json(&fit_json(
                &fit,
                json!({
                    "fixed": {"segments": segments, "t0_uK": t0_uk, "u0_uK": u0_uk, "p0": p0,
                              "t_ref_us": inference::POWER_LAW_T_REF * 1e6},
                }),
            )?)
        }
        Command::FitMis { input, trap, basic_uk } => {
            let trap = ctx.trap(&trap)?;
            let rows: Vec<MisRow> = read_csv(&input)?;
            let pts: Vec<_> = rows.iter().map(|r| (r.delta_sq_nm2, r.delta_t_uk)).collect();
            let fit = fit_mis_linear(&pts, &trap, basic_uk)?;
            ctx.emit_json(&fit_json(&fit, json!({"basic_total_uK": basic_uk, "trap": trap_json(&trap)}))?)
        }
        Command::FitGaussian { input } => {
            let grid: Vec<ScanPoint> = read_csv(&input)?;
            let scan = CalibrationScan::new(grid)?;
            let (fit, _) = fit_gaussian2d(&scan)?;
            ctx.emit_json(&fit_json(&fit, json!({"mhz_per_um": MHZ_PER_UM}))?)
        }
        Command::FitFidelity { input } => {
            let rows: Vec<FidelityRow> = read_csv(&input)?;
            let pts: Vec<_> = rows.iter().map(|r| DataPoint::new(r.n, r.fidelity, Some(r.stderr))).collect();
            let fit = fit_fidelity_decay(&pts)?;
            ctx.emit_json(&fit_json(&fit, json!({}))?)
        }
        Command::Budget {
            trap,
            basic_uk,
            alpha,
            dx_start_nm,
            dx_target_nm,
            ref_dt_uk,
            ref_distance_um,
            ref_time_us,
            distance_um,
            time_us,
            law,
        } => {
            let trap = ctx.trap(&trap)?;
            let inputs = BudgetInputs {
                basic_per_exchange: uk_to_k(basic_uk),
                alpha,
                delta_x_start: dx_start_nm / 1e9,
                delta_x_target: dx_target_nm / 1e9,
                reference: TransportReference {
                    delta_t_ref: uk_to_k(ref_dt_uk),
                    distance_ref: ref_distance_um / 1e6,
                    time_ref: ref_time_us / 1e6,
                },
                distance: distance_um / 1e6,
                time: time_us / 1e6,
                law: parse_law(&law)?,
            };
            let b = heating_budget(&trap, &inputs)?;
            ctx.emit_json(&json!({
                "basic_1_uK": k_to_uk(b.basic_1),
                "mis_1_uK": k_to_uk(b.mis_1),
                "transport_uK": k_to_uk(b.transport),
                "basic_2_uK": k_to_uk(b.basic_2),
                "mis_2_uK": k_to_uk(b.mis_2),
                "total_uK": k_to_uk(b.total),
                "alpha": b.alpha,
                "exponent": inputs.law.exponent(),
                "trap": trap_json(&trap),
            }))
        }
        Command::Waveform {
            kind,
            profile,
            duration_us,
            sample_rate,
            f_start_mhz,
            f_end_mhz,
            hold_us,
            band_min_mhz,
            band_max_mhz,
            max_heating_uk,
            mismatch_nm,
            trap,
        } => {
            let p = ctx.profile(&profile)?;
            let duration = duration_us
                .or(ctx.config.duration_us)
                .ok_or_else(|| Error::Config("no duration given (--duration-us or `duration_us`)".into()))?
                / 1e6;
            let (table, distance, purpose) = match kind {
                WaveKind::Amplitude => (
                    compile_amplitude_waveforms(&p, duration, sample_rate)?,
                    mismatch_nm / 1e9,
                    PlanPurpose::AmplitudeExchange,
                ),
                WaveKind::Sweep => {
                    let (Some(a), Some(b)) = (f_start_mhz, f_end_mhz) else {
                        return Err(Error::param("a sweep needs --f-start-mhz and --f-end-mhz"));
                    };
                    let d = inference::freq_to_position((b - a).abs()) / 1e6;
                    (compile_frequency_sweep(&p, a, b, duration, sample_rate)?, d, PlanPurpose::Transport)
                }
            };
            if let (Some(lo), Some(hi)) = (band_min_mhz, band_max_mhz) {
                table.check_band(lo, hi)?;
            }
            if let Some(limit) = max_heating_uk {
                let t = ctx.trap(&trap)?;
                let plan = MotionPlan::new(p.clone(), distance, duration, purpose)?;
                let heating = k_to_uk(spectral::delta_n(&plan, &t).delta_t);
                if heating > limit {
                    return Err(Error::param(format!(
                        "pre-flight check: predicted heating {heating:.6} μK exceeds the limit {limit} μK"
                    )));
                }
            }
            let table = table.with_hold(hold_us / 1e6)?;
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            ctx.emit_bytes(&buf)
        }
    }
}

/// Run metadata next to the main output (`<output>.meta.json`), or on
/// stderr when writing to stdout.
fn write_meta(output: Option<&Path>, meta: &Value) -> Result<()> {
    let text = to_sorted_json(meta)?;
    match output {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".meta.json");
            crate::io::write_atomic(Path::new(&name), text.as_bytes())
        }
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // a second call in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
