//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::Matrix2;
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use shuttle_core::inference::{
    combine_mismatch, fit_fidelity_decay, fit_gaussian2d, fit_mis_linear, fit_power_law, survival_prob, survival_tail,
    CalibrationScan, DataPoint, GaussianPeak, PowerLawContext, ScanPoint, SurvivalModel,
};
use shuttle_core::oracle::{monte_carlo_survival_model, simulate_driven, thermal_ensemble_heating, SimState};
use shuttle_core::phys::{gs_fraction_reduction, k_to_uk, uk_to_k, ThermalState, TrapConfig, HBAR};
use shuttle_core::spectral::{
    delta_n, heating_budget, normalized_spectrum, normalized_spectrum_quadrature, scaling_study, BudgetInputs,
    ScalingLaw, TransportReference,
};
use shuttle_core::trajectories::{eval_profile, sinusoidal_profile, smoothstep_profile, MotionPlan, PlanPurpose};
use shuttle_core::waveform::compile_amplitude_waveforms;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn trap() -> TrapConfig {
    TrapConfig::rb87_calibrated(uk_to_k(15.0), 0.13, 1e-3).unwrap()
}

fn log_times(trap: &TrapConfig, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp() / trap.omega0()).collect()
}

fn scaling_exponents() -> Outcome {
    let t = trap();
    let times = log_times(&t, 50.0, 5000.0, 12);
    let cases = [
        ("smoothstep k=1", smoothstep_profile(1).unwrap(), 4.0),
        ("sinusoidal", sinusoidal_profile(), 6.0),
        ("smoothstep k=3", smoothstep_profile(3).unwrap(), 8.0),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, p, want) in cases {
        match scaling_study(&p, &t, 1e-6, &times) {
            Ok(s) => {
                pass &= (s.exponent - want).abs() <= 0.3;
                parts.push(format!("{name}: p={:.3} (want {want}±0.3)", s.exponent));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

fn transport_scaling() -> Outcome {
    let inputs = BudgetInputs {
        basic_per_exchange: uk_to_k(0.156),
        alpha: 0.0,
        delta_x_start: 0.0,
        delta_x_target: 0.0,
        reference: TransportReference { delta_t_ref: uk_to_k(0.627), distance_ref: 5.6e-6, time_ref: 100e-6 },
        distance: 20e-6,
        time: 130e-6,
        law: ScalingLaw::Smoothstep(3),
    };
    let b = heating_budget(&trap(), &inputs).unwrap();
    let v = k_to_uk(b.transport);
    outcome((v - 0.98).abs() <= 0.01, format!("transport = {v:.4} μK (want 0.98±0.01)"))
}

fn classical_spectral_equivalence() -> Outcome {
    let t = trap();
    let profiles = [
        smoothstep_profile(1).unwrap(),
        smoothstep_profile(2).unwrap(),
        smoothstep_profile(3).unwrap(),
        smoothstep_profile(5).unwrap(),
        sinusoidal_profile(),
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut failures = Vec::new();
    for p in &profiles {
        for d in [1e-6, 5.6e-6, 20e-6] {
            for dur in [9e-6, 17e-6] {
                let plan = MotionPlan::new(p.clone(), d, dur, PlanPurpose::Transport).unwrap();
                let predicted = delta_n(&plan, &t).delta_n * HBAR * t.omega0();
                match simulate_driven(&plan, &t, SimState::at_rest(&t, 0.0)) {
                    Ok(end) => {
                        let rel = (end.energy - predicted).abs() / predicted;
                        worst = worst.max(rel);
                        if rel > 1e-6 {
                            failures.push(format!("{p} D={d} T={dur}: rel {rel:.2e}"));
                        }
                    }
                    Err(e) => failures.push(format!("{p} D={d} T={dur}: {e}")),
                }
                count += 1;
            }
        }
    }
    let pass = count >= 20 && failures.is_empty();
    let mut detail = format!("{count} combinations, worst relative error {worst:.2e} (limit 1e-6)");
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join("; ")));
    }
    outcome(pass, detail)
}

fn reference_survival_model() -> SurvivalModel {
    SurvivalModel::new(0.98, uk_to_k(15.0), uk_to_k(0.165), 1e-3).unwrap()
}

fn survival_closed_form() -> Outcome {
    let v = survival_prob(&reference_survival_model(), 1000.0);
    outcome((0.88..=0.91).contains(&v), format!("P(1000) = {v:.4} (want [0.88, 0.91])"))
}

fn mc_agreement() -> Outcome {
    let model = reference_survival_model();
    let curve = match monte_carlo_survival_model(&model, 1000, 100_000, 2024) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut worst: f64 = 0.0;
    for pt in &curve {
        let exact = survival_prob(&model, pt.cycle as f64);
        let z = if pt.stderr > 0.0 {
            (pt.survival - exact).abs() / pt.stderr
        } else if pt.survival == exact {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(z);
    }
    outcome(
        curve.len() == 1001 && worst <= 3.0,
        format!("10⁵ samples, cycles 0..=1000, max deviation {worst:.2} σ (limit 3)"),
    )
}

/// `ζ` with `survival_tail(ζ) = tail`.
fn zeta_for_tail(tail: f64) -> f64 {
    let (mut lo, mut hi) = (1e-4f64.ln(), 1e4f64.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if survival_tail(mid.exp()) < tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Variance of the exponent for a design, from the Fisher information of
/// binomial survival data with the smoothed variance used by the fit.
fn exponent_variance(ctx: &PowerLawContext, ln_a: f64, p: f64, trials: f64, times: &[f64]) -> f64 {
    let mut info = Matrix2::zeros();
    for &t in times {
        let y = ctx.survival(t, ln_a, p);
        if y <= 0.0 {
            continue;
        }
        let h = 1e-6;
        let ga = (ctx.survival(t, ln_a + h, p) - ctx.survival(t, ln_a - h, p)) / (2.0 * h);
        let gp = (ctx.survival(t, ln_a, p + h) - ctx.survival(t, ln_a, p - h)) / (2.0 * h);
        let q = (trials * y + 0.5) / (trials + 1.0);
        let w = trials / (q * (1.0 - q));
        info += w * Matrix2::new(ga * ga, ga * gp, ga * gp, gp * gp);
    }
    info.try_inverse().map_or(f64::INFINITY, |c| c[(1, 1)])
}

/// Exchange algorithm on a 1 μs grid minimising the exponent variance.
fn exponent_optimal_design(ctx: &PowerLawContext, ln_a: f64, p: f64, trials: f64) -> Vec<f64> {
    let grid: Vec<f64> = (60..=200).map(|t| t as f64 * 1e-6).collect();
    let mut design: Vec<f64> = (0..8).map(|i| (60.0 + 20.0 * i as f64) * 1e-6).collect();
    let mut best = exponent_variance(ctx, ln_a, p, trials, &design);
    loop {
        let mut improved = false;
        for i in 0..design.len() {
            for &c in &grid {
                if design.iter().any(|&d| (d - c).abs() < 1e-9) {
                    continue;
                }
                let mut trial = design.clone();
                trial[i] = c;
                let v = exponent_variance(ctx, ln_a, p, trials, &trial);
                if v < best - 1e-15 {
                    best = v;
                    design = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    design.sort_by(f64::total_cmp);
    design
}

fn power_law_coverage(ctx: &PowerLawContext, ln_a: f64, times: &[f64], seed: u64) -> (usize, usize) {
    let mut inside = 0;
    let mut failed = 0;
    for rep in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(rep);
        let pts: Vec<DataPoint> = times
            .iter()
            .map(|&t| {
                let prob = ctx.survival(t, ln_a, 8.0).clamp(0.0, 1.0);
                let k = Binomial::new(100, prob).unwrap().sample(&mut rng);
                DataPoint::binomial(t, k as f64 / 100.0, 100)
            })
            .collect();
        match fit_power_law(&pts, ctx) {
            Ok(f) if (7.0..=9.0).contains(&f.get("p")) => inside += 1,
            Ok(_) => {}
            Err(_) => failed += 1,
        }
    }
    (inside, failed)
}

fn power_law_calibration() -> Outcome {
    let ctx = PowerLawContext { segments: 51, t0: uk_to_k(15.0), u0: 1e-3, p0: 0.98 };
    // true amplitude: half survival after 51 segments of 105 μs
    let dt = (zeta_for_tail(ctx.p0 - 0.5) * ctx.u0 - ctx.t0) / ctx.segments as f64;
    let a_uk = k_to_uk(dt) * (105.0f64 / 100.0).powi(8);
    let ln_a = a_uk.ln();
    let design = exponent_optimal_design(&ctx, ln_a, 8.0, 100.0);
    let (inside, failed) = power_law_coverage(&ctx, ln_a, &design, 6);
    let spanning: Vec<f64> = [60.0, 80.0, 95.0, 105.0, 115.0, 130.0, 160.0, 200.0].iter().map(|t| t * 1e-6).collect();
    let (span_inside, _) = power_law_coverage(&ctx, ln_a, &spanning, 6);
    let us: Vec<String> = design.iter().map(|t| format!("{:.0}", t * 1e6)).collect();
    outcome(
        inside >= 90,
        format!(
            "A = {a_uk:.3} μK, times [{}] μs: p in [7, 9] in {inside}/100 ({failed} fit errors); \
             range-spanning design: {span_inside}/100 (informational)",
            us.join(", ")
        ),
    )
}

fn misalignment_regression() -> Outcome {
    let pts = [(1657.0, 1.48), (1018.0, 1.35), (3653.0, 1.89)];
    match fit_mis_linear(&pts, &trap(), 0.156) {
        Ok(f) => {
            let v = f.get("transport_exp_uK");
            outcome((v - 1.01).abs() <= 0.15, format!("transport_exp = {v:.4} μK (want 1.01±0.15)"))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn mismatch_arithmetic() -> Outcome {
    let cases = [((19.0, 36.0), 1657.0), ((17.0, 27.0), 1018.0), ((38.0, 47.0), 3653.0)];
    let got: Vec<f64> = cases.iter().map(|((a, b), _)| combine_mismatch(*a, *b).unwrap()).collect();
    let pass = cases.iter().zip(&got).all(|((_, want), g)| g == want);
    outcome(pass, format!("{got:?} (want [1657, 1018, 3653] exactly)"))
}

fn ground_state_bookkeeping() -> Outcome {
    let t = trap();
    let s = ThermalState::new(uk_to_k(15.0)).unwrap();
    let r1 = 100.0 * gs_fraction_reduction(&s, &t, uk_to_k(0.156)).unwrap();
    let r2 = 100.0 * gs_fraction_reduction(&s, &t, uk_to_k(0.783)).unwrap();
    outcome(
        (r1 - 0.2).abs() <= 0.05 && (r2 - 1.0).abs() <= 0.1,
        format!("reductions {r1:.4}% (want 0.2±0.05) and {r2:.4}% (want 1.0±0.1)"),
    )
}

fn fidelity_fits() -> Outcome {
    // in situ: 0.88 after the echo sequence, 300 transfers; inter-site: 100 transports
    let cases = [(0.88, 0.99992, 300.0), (0.857, 0.9998, 100.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (f0, f, n_max) in cases {
        let pts: Vec<DataPoint> = (0..=10)
            .map(|i| {
                let n = n_max * i as f64 / 10.0;
                DataPoint::new(n, f0 * f64::powf(f, n), Some(0.03))
            })
            .collect();
        match fit_fidelity_decay(&pts) {
            Ok(fit) => {
                let rel = (fit.get("f") / f - 1.0).abs();
                pass &= rel <= 1e-6 && fit.converged;
                parts.push(format!("f={:.8} (rel {rel:.1e})", fit.get("f")));
            }
            Err(e) => {
                pass = false;
                parts.push(e.to_string());
            }
        }
    }
    outcome(pass, parts.join(", "))
}

fn gaussian_calibration() -> Outcome {
    let s2 = (88.8984, 93.1187);
    let truth = GaussianPeak { center: s2, widths: (0.02, 0.02), amplitude: 0.5, offset: 0.4 };
    // ~200 nm square, not centred on the trap
    let step = 0.0075;
    let start = (88.872, 93.092);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut grid = Vec::new();
    for i in 0..9 {
        for j in 0..9 {
            let (fx, fy) = (start.0 + step * i as f64, start.1 + step * j as f64);
            let k = Binomial::new(100, truth.eval(fx, fy)).unwrap().sample(&mut rng);
            grid.push(ScanPoint { fx_mhz: fx, fy_mhz: fy, survival: k as f64 / 100.0, trials: 100 });
        }
    }
    match CalibrationScan::new(grid).and_then(|s| fit_gaussian2d(&s)) {
        Ok((_, peak)) => {
            let dx = (peak.center.0 - s2.0).abs();
            let dy = (peak.center.1 - s2.1).abs();
            outcome(dx <= 0.003 && dy <= 0.003, format!("centre error ({dx:.5}, {dy:.5}) MHz (limit 0.003)"))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn property_suites() -> Outcome {
    let mut runner = TestRunner::new(PropConfig { cases: 64, failure_persistence: None, ..PropConfig::default() });
    let mut failures = Vec::new();

    let boundary = runner.run(&(0u32..=12, 0.0f64..=1.0), |(k, s)| {
        let p = smoothstep_profile(k).unwrap();
        prop_assert!(eval_profile(&p, 0.0, 0).unwrap().abs() < 1e-12);
        prop_assert!((eval_profile(&p, 1.0, 0).unwrap() - 1.0).abs() < 1e-12);
        for r in 1..=k as usize {
            prop_assert!(eval_profile(&p, 0.0, r).unwrap().abs() < 1e-9);
            prop_assert!(eval_profile(&p, 1.0, r).unwrap().abs() < 1e-9);
        }
        let mirrored = 1.0 - eval_profile(&p, 1.0 - s, 0).unwrap();
        prop_assert!((eval_profile(&p, s, 0).unwrap() - mirrored).abs() < 1e-12);
        Ok(())
    });
    if let Err(e) = boundary {
        failures.push(format!("profile boundary/symmetry: {e}"));
    }

    let spectra = runner.run(&(0u32..=8, 0.0f64..200.0), |(k, theta)| {
        let p = smoothstep_profile(k).unwrap();
        let a = normalized_spectrum(&p, theta);
        let b = normalized_spectrum_quadrature(&p, theta).unwrap();
        prop_assert!((a - b).norm() <= 1e-8 * a.norm().max(b.norm()) + 1e-14);
        let c = normalized_spectrum(&p, -theta);
        prop_assert!((c - a.conj()).norm() <= 1e-15 * a.norm() + 1e-300);
        Ok(())
    });
    if let Err(e) = spectra {
        failures.push(format!("closed form vs quadrature: {e}"));
    }

    let monotone = runner.run(&(0.5f64..1.0, 1.0f64..30.0, 0.0f64..2.0), |(p0, t0, dt)| {
        let m = SurvivalModel::new(p0, uk_to_k(t0), uk_to_k(dt), 1e-3).unwrap();
        let mut last = f64::INFINITY;
        for n in [0.0, 1.0, 10.0, 100.0, 1000.0, 10000.0] {
            let v = survival_prob(&m, n);
            prop_assert!((0.0..=1.0).contains(&v) && v <= last);
            last = v;
        }
        Ok(())
    });
    if let Err(e) = monotone {
        failures.push(format!("survival monotonicity: {e}"));
    }

    let waveforms = runner.run(&(1e-6f64..50e-6, 10e6f64..1e9), |(dur, rate)| {
        let w = compile_amplitude_waveforms(&smoothstep_profile(3).unwrap(), dur, rate).unwrap();
        for (m, s) in w.m_trap_amplitude.iter().zip(&w.s_trap_amplitude) {
            prop_assert_eq!(m + s, 1.0);
        }
        Ok(())
    });
    if let Err(e) = waveforms {
        failures.push(format!("waveform complementarity: {e}"));
    }

    // determinism under fixed seeds
    // hot enough that losses occur within the simulated cycles
    let model = SurvivalModel::new(0.98, uk_to_k(15.0), uk_to_k(2.0), 1e-3).unwrap();
    let a = monte_carlo_survival_model(&model, 200, 5000, 77).unwrap();
    let b = monte_carlo_survival_model(&model, 200, 5000, 77).unwrap();
    let c = monte_carlo_survival_model(&model, 200, 5000, 78).unwrap();
    if a != b || a == c {
        failures.push("survival Monte Carlo is not seed-deterministic".into());
    }
    let t = trap();
    let plan = MotionPlan::new(smoothstep_profile(3).unwrap(), 5.6e-6, 20e-6, PlanPurpose::Transport).unwrap();
    let e1 = thermal_ensemble_heating(&plan, &t, uk_to_k(15.0), 200, 5).unwrap();
    let e2 = thermal_ensemble_heating(&plan, &t, uk_to_k(15.0), 200, 5).unwrap();
    if e1 != e2 {
        failures.push("ensemble heating is not seed-deterministic".into());
    }

    let pass = failures.is_empty();
    let detail = if pass {
        "profile boundaries and symmetry, spectrum conjugation and quadrature agreement, survival \
         monotonicity, waveform complementarity, seeded determinism"
            .to_string()
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("scaling-law exponents", Duration::from_secs(60), scaling_exponents),
        ("transport scaling reproduction", Duration::from_secs(1), transport_scaling),
        ("classical-spectral equivalence", Duration::from_secs(60), classical_spectral_equivalence),
        ("survival closed form", Duration::from_secs(1), survival_closed_form),
        ("Monte-Carlo agreement", Duration::from_secs(120), mc_agreement),
        ("power-law fit calibration", Duration::from_secs(120), power_law_calibration),
        ("misalignment regression", Duration::from_secs(1), misalignment_regression),
        ("mismatch arithmetic", Duration::from_secs(1), mismatch_arithmetic),
        ("ground-state bookkeeping", Duration::from_secs(1), ground_state_bookkeeping),
        ("fidelity fits", Duration::from_secs(1), fidelity_fits),
        ("Gaussian calibration", Duration::from_secs(30), gaussian_calibration),
        ("property suites", Duration::from_secs(120), property_suites),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.2?} of {:.0?}{}]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed,
            limit,
            if in_time { "" } else { ", too slow" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
