//! Closed-form `∫₀¹ p''(s) e^{−iθs} ds` for the supported profile families.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::trajectories::{MotionProfile, Smoothstep};

/// Normalised spectrum of the profile's full acceleration,
/// `∫ p''(s) e^{−iθs} ds` over the real line with the trap at rest outside
/// `[0, 1]`. Endpoint velocity jumps (only the linear ramp has them)
/// contribute the impulsive term `p'(0) − p'(1) e^{−iθ}`.
pub(crate) fn normalized_spectrum(profile: &MotionProfile, theta: f64) -> Complex64 {
    let smooth = match profile {
        MotionProfile::Smoothstep(p) => polynomial_part(p, theta),
        MotionProfile::Sinusoidal => sinusoidal_part(theta),
    };
    smooth + impulsive_part(profile, theta)
}

pub(crate) fn impulsive_part(profile: &MotionProfile, theta: f64) -> Complex64 {
    let v0 = profile.endpoint_derivative(1, false);
    let v1 = profile.endpoint_derivative(1, true);
    if v0 == 0.0 && v1 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(v0, 0.0) - v1 * Complex64::from_polar(1.0, -theta)
}

fn polynomial_part(p: &Smoothstep, theta: f64) -> Complex64 {
    let q_degree = p.degree().saturating_sub(2);
    if p.degree() < 2 {
        return Complex64::new(0.0, 0.0);
    }
    if theta >= crossover(q_degree) {
        by_parts(p, q_degree, theta)
    } else {
        moment_series(p, q_degree, theta)
    }
}

/// Below this θ the by-parts sum cancels badly and the moment series is used.
fn crossover(q_degree: usize) -> f64 {
    (q_degree as f64 + 2.0).max(4.0)
}

/// Repeated integration by parts; exact for polynomials:
/// `Σ_j [q⁽ʲ⁾(0) − q⁽ʲ⁾(1) e^{−iθ}] / (iθ)^{j+1}`.
fn by_parts(p: &Smoothstep, q_degree: usize, theta: f64) -> Complex64 {
    let phase = Complex64::from_polar(1.0, -theta);
    let i_theta = Complex64::new(0.0, theta);
    let mut denom = i_theta;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..=q_degree {
        let start = p.endpoint_derivative(j + 2, false);
        let end = p.endpoint_derivative(j + 2, true);
        sum += (start - end * phase) / denom;
        denom *= i_theta;
    }
    sum
}

/// `C(n, k)` as a float.
fn binom_f(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Taylor expansion of the kernel: `Σ_n (−iθ)ⁿ/n! · ∫ sⁿ q(s) ds`, with the
/// moments computed from the Bernstein form of `q = p''`.
fn moment_series(p: &Smoothstep, q_degree: usize, theta: f64) -> Complex64 {
    let c = p.derivative_bernstein(2);
    let big_n = q_degree;
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0); // (−iθ)^n / n!
    for n in 0..400usize {
        // ∫ sⁿ B_{j,N}(s) ds = C(N,j) (j+n)! (N−j)! / (N+n+1)!
        //                    = C(N,j) / ((N+n+1) C(N+n, j+n))
        let moment: f64 = c
            .iter()
            .enumerate()
            .map(|(j, cj)| cj * binom_f(big_n, j) / ((big_n + n + 1) as f64 * binom_f(big_n + n, j + n)))
            .sum();
        let term = power * moment;
        sum += term;
        if n as f64 > theta && power.norm() * scale < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        power *= Complex64::new(0.0, -theta) / (n + 1) as f64;
    }
    sum
}

/// `∫₀¹ 2π sin(2πs) e^{−iθs} ds = 4π²(1 − e^{−iθ}) / (4π² − θ²)`, written in
/// terms of `δ = θ − 2π` so the removable singularity at `θ = 2π` is handled.
fn sinusoidal_part(theta: f64) -> Complex64 {
    let delta = theta - 2.0 * PI;
    let half = 0.5 * delta;
    let re = half.sin() * sinc(half);
    let im = sinc(delta);
    -4.0 * PI * PI * Complex64::new(re, im) / (4.0 * PI + delta)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
