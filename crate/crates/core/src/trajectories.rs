//! Dimensionless motion profiles on `[0, 1]` and their physical scaling.
//!
//! A profile maps normalised time `s = t / T` to normalised displacement.
//! Two families are provided:
//!
//! * smoothstep of order `k`: the degree `2k + 1` polynomial going from 0 to
//!   1 whose derivatives of order `1..=k` vanish at both ends. `k = 1` is the
//!   constant-jerk ramp `3s² − 2s³`, `k = 3` is `35s⁴ − 84s⁵ + 70s⁶ − 20s⁷`.
//! * sinusoidal: `s − sin(2πs) / 2π`, i.e. `½[(1/π) sin(π(2s − 1)) + 2s]`.
//!
//! Smoothstep polynomials are stored in the Bernstein basis (the profile is
//! the regularised incomplete beta function `I_s(k+1, k+1)`), which keeps
//! evaluation stable for high orders where the monomial coefficients are
//! large and alternate in sign.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Highest smoothstep order whose monomial coefficients are exact in `f64`.
pub const MAX_SMOOTHSTEP_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum MotionProfile {
    Smoothstep(Smoothstep),
    Sinusoidal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Smoothstep {
    order: u32,
    /// Bernstein coefficients of degree `2k + 1`.
    bernstein: Vec<f64>,
    /// Monomial coefficients, ascending powers.
    monomial: Vec<f64>,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn falling_factorial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64)
}

/// `r`-th forward difference of a coefficient sequence.
fn forward_difference(coeffs: &[f64], r: usize) -> Vec<f64> {
    let mut d = coeffs.to_vec();
    for _ in 0..r {
        for j in 0..d.len() - 1 {
            d[j] = d[j + 1] - d[j];
        }
        d.pop();
    }
    d
}

fn de_casteljau(coeffs: &[f64], s: f64) -> f64 {
    let mut b = coeffs.to_vec();
    let u = 1.0 - s;
    for level in 1..b.len() {
        for j in 0..b.len() - level {
            b[j] = u * b[j] + s * b[j + 1];
        }
    }
    b[0]
}

/// `(sin 2πs, cos 2πs)` with the argument reduced exactly, so the values at
/// `s ∈ {0, ½, 1}` carry no reduction error.
pub(crate) fn sincos_2pi(s: f64) -> (f64, f64) {
    let r = s - s.round();
    let a = r.abs();
    let (sa, ca) = if a > 0.25 {
        let (sb, cb) = (2.0 * PI * (0.5 - a)).sin_cos();
        (sb, -cb)
    } else {
        (2.0 * PI * a).sin_cos()
    };
    (if r.is_sign_negative() { -sa } else { sa }, ca)
}

impl Smoothstep {
    fn new(order: u32) -> Self {
        let k = order as u64;
        let n = 2 * k + 1;
        let bernstein = (0..=n).map(|j| if j > k { 1.0 } else { 0.0 }).collect();
        let mut monomial = vec![0.0; n as usize + 1];
        for i in 0..=k {
            let c = binomial(k + i, i) * binomial(2 * k + 1, k - i);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            monomial[(k + 1 + i) as usize] = sign * c as f64;
        }
        Smoothstep { order, bernstein, monomial }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.bernstein.len() - 1
    }

    pub fn monomial_coefficients(&self) -> &[f64] {
        &self.monomial
    }

    fn derivative(&self, s: f64, r: usize) -> f64 {
        let n = self.degree();
        if r > n {
            return 0.0;
        }
        let d = forward_difference(&self.bernstein, r);
        falling_factorial(n, r) * de_casteljau(&d, s)
    }

    /// Exact `r`-th derivative at `s = 0` (`at_end = false`) or `s = 1`.
    pub(crate) fn endpoint_derivative(&self, r: usize, at_end: bool) -> f64 {
        let n = self.degree();
        if r > n {
            return 0.0;
        }
        let d = forward_difference(&self.bernstein, r);
        let c = if at_end { d[d.len() - 1] } else { d[0] };
        falling_factorial(n, r) * c
    }

    /// Bernstein coefficients of the `r`-th derivative, already scaled so the
    /// derivative equals `Σ c_j B_{j, n−r}(s)`.
    pub(crate) fn derivative_bernstein(&self, r: usize) -> Vec<f64> {
        let n = self.degree();
        if r > n {
            return vec![0.0];
        }
        let scale = falling_factorial(n, r);
        forward_difference(&self.bernstein, r).into_iter().map(|c| c * scale).collect()
    }
}

/// Smoothstep profile of order `k`.
pub fn smoothstep_profile(k: u32) -> Result<MotionProfile> {
    if k > MAX_SMOOTHSTEP_ORDER {
        return Err(Error::param(format!("smoothstep order {k} exceeds the supported maximum {MAX_SMOOTHSTEP_ORDER}")));
    }
    Ok(MotionProfile::Smoothstep(Smoothstep::new(k)))
}

pub fn sinusoidal_profile() -> MotionProfile {
    MotionProfile::Sinusoidal
}

/// Checked evaluation of the `deriv_order`-th derivative of `profile` at `s`.
pub fn eval_profile(profile: &MotionProfile, s: f64, deriv_order: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain(format!("profile argument must lie in [0, 1], got {s}")));
    }
    Ok(profile.value(s, deriv_order))
}

impl MotionProfile {
    /// Unchecked evaluation; `s` is assumed to lie in `[0, 1]`.
    pub fn value(&self, s: f64, deriv_order: usize) -> f64 {
        match self {
            MotionProfile::Smoothstep(p) => p.derivative(s, deriv_order),
            MotionProfile::Sinusoidal => sinusoidal_derivative(s, deriv_order),
        }
    }

    /// Derivative of order `r` at `s = 0` or (with `at_end`) `s = 1`.
    pub fn endpoint_derivative(&self, r: usize, at_end: bool) -> f64 {
        match self {
            MotionProfile::Smoothstep(p) => p.endpoint_derivative(r, at_end),
            MotionProfile::Sinusoidal => sinusoidal_derivative(if at_end { 1.0 } else { 0.0 }, r),
        }
    }

    /// Monomial coefficients (ascending) for polynomial profiles.
    pub fn coefficients(&self) -> Option<&[f64]> {
        match self {
            MotionProfile::Smoothstep(p) => Some(p.monomial_coefficients()),
            MotionProfile::Sinusoidal => None,
        }
    }

    /// Number of own oscillation periods on `[0, 1]`, used to size quadrature
    /// panels.
    pub fn oscillation_periods(&self) -> f64 {
        match self {
            MotionProfile::Smoothstep(p) => 0.5 * p.degree() as f64,
            MotionProfile::Sinusoidal => 1.0,
        }
    }

    /// Order of the first derivative that is non-zero at the endpoints.
    pub fn smoothness(&self) -> usize {
        match self {
            MotionProfile::Smoothstep(p) => p.order as usize + 1,
            MotionProfile::Sinusoidal => 2,
        }
    }
}

fn sinusoidal_derivative(s: f64, r: usize) -> f64 {
    let (sin, cos) = sincos_2pi(s);
    // d^r/ds^r [−sin(2πs)/2π] = −(2π)^{r−1} sin(2πs + rπ/2)
    let shifted = match r % 4 {
        0 => sin,
        1 => cos,
        2 => -sin,
        _ => -cos,
    };
    match r {
        0 => s - sin / (2.0 * PI),
        1 => 1.0 - cos,
        _ => -(2.0 * PI).powi(r as i32 - 1) * shifted,
    }
}

impl fmt::Display for MotionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MotionProfile::Smoothstep(p) => write!(f, "smoothstep:{}", p.order),
            MotionProfile::Sinusoidal => f.write_str("sinusoidal"),
        }
    }
}

impl FromStr for MotionProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "sinusoidal" {
            return Ok(MotionProfile::Sinusoidal);
        }
        if let Some(k) = s.strip_prefix("smoothstep:") {
            let k: u32 = k.parse().map_err(|_| Error::Config(format!("bad smoothstep order in {s:?}")))?;
            return smoothstep_profile(k);
        }
        Err(Error::Config(format!("unknown profile {s:?}; expected `smoothstep:k` or `sinusoidal`")))
    }
}

impl Serialize for MotionProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MotionProfile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanPurpose {
    Transport,
    AmplitudeExchange,
}

/// A profile scaled to a physical distance and duration: the trap centre
/// follows `x(t) = distance · profile(t / duration)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionPlan {
    profile: MotionProfile,
    distance: f64,
    duration: f64,
    purpose: PlanPurpose,
}

pub fn make_plan(profile: MotionProfile, distance: f64, duration: f64, purpose: PlanPurpose) -> Result<MotionPlan> {
    MotionPlan::new(profile, distance, duration, purpose)
}

impl MotionPlan {
    pub fn new(profile: MotionProfile, distance: f64, duration: f64, purpose: PlanPurpose) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::domain(format!("duration must be > 0, got {duration}")));
        }
        if !(distance >= 0.0 && distance.is_finite()) {
            return Err(Error::domain(format!("distance must be >= 0, got {distance}")));
        }
        Ok(MotionPlan { profile, distance, duration, purpose })
    }

    pub fn profile(&self) -> &MotionProfile {
        &self.profile
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn purpose(&self) -> PlanPurpose {
        self.purpose
    }

    /// `order`-th time derivative of the trap centre. Outside `[0, T]` the
    /// trap rests at its start or end point.
    pub fn derivative(&self, t: f64, order: usize) -> f64 {
        let s = t / self.duration;
        if !(0.0..=1.0).contains(&s) {
            return match order {
                0 if s > 1.0 => self.distance,
                _ => 0.0,
            };
        }
        self.distance / self.duration.powi(order as i32) * self.profile.value(s, order)
    }

    pub fn position(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }

    pub fn velocity(&self, t: f64) -> f64 {
        self.derivative(t, 1)
    }

    pub fn acceleration(&self, t: f64) -> f64 {
        self.derivative(t, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn eval_monomial(c: &[f64], s: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
    }

    #[test]
    fn constant_jerk_coefficients() {
        let p = smoothstep_profile(1).unwrap();
        assert_eq!(p.coefficients().unwrap(), &[0.0, 0.0, 3.0, -2.0]);
    }

    #[test]
    fn sta_polynomial_coefficients() {
        let p = smoothstep_profile(3).unwrap();
        assert_eq!(p.coefficients().unwrap(), &[0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0]);
    }

    #[test]
    fn order_zero_is_linear_ramp() {
        let p = smoothstep_profile(0).unwrap();
        assert_eq!(p.coefficients().unwrap(), &[0.0, 1.0]);
        for s in [0.0, 0.2, 0.7, 1.0] {
            assert_relative_eq!(p.value(s, 0), s, epsilon = 1e-15);
        }
    }

    #[test]
    fn bernstein_matches_monomial_form() {
        for k in 0..=MAX_SMOOTHSTEP_ORDER {
            let p = smoothstep_profile(k).unwrap();
            let c = p.coefficients().unwrap();
            for i in 0..=20 {
                let s = i as f64 / 20.0;
                let tol = if k <= 6 { 1e-12 } else { 1e-6 };
                assert!((p.value(s, 0) - eval_monomial(c, s)).abs() < tol, "k={k} s={s}");
            }
        }
    }

    #[test]
    fn sinusoidal_boundaries() {
        let p = sinusoidal_profile();
        assert_eq!(p.value(0.0, 0), 0.0);
        assert_eq!(p.value(1.0, 0), 1.0);
        assert_eq!(p.value(0.5, 0), 0.5);
        assert_eq!(p.value(0.0, 1), 0.0);
        assert_eq!(p.value(1.0, 1), 0.0);
    }

    #[test]
    fn sinusoidal_matches_shifted_form() {
        let p = sinusoidal_profile();
        for i in 0..=50 {
            let s = i as f64 / 50.0;
            let tau = 2.0 * s - 1.0;
            let direct = 0.5 * ((PI * tau).sin() / PI + tau + 1.0);
            assert!((p.value(s, 0) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn sta_endpoint_derivatives_vanish() {
        let p = smoothstep_profile(3).unwrap();
        for r in 1..=3 {
            assert_eq!(p.value(0.0, r), 0.0);
            assert_eq!(p.value(1.0, r), 0.0);
            assert_eq!(p.endpoint_derivative(r, false), 0.0);
            assert_eq!(p.endpoint_derivative(r, true), 0.0);
        }
        assert_eq!(p.endpoint_derivative(4, false), 840.0);
        assert_eq!(p.endpoint_derivative(4, true), -840.0);
        assert_relative_eq!(p.value(0.5, 0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn constant_jerk_second_derivative_midpoint() {
        let p = smoothstep_profile(1).unwrap();
        assert!(p.value(0.5, 2).abs() < 1e-14);
        let h = 1e-4;
        let fd = (p.value(0.5 + h, 0) - 2.0 * p.value(0.5, 0) + p.value(0.5 - h, 0)) / (h * h);
        assert!(fd.abs() < 1e-6);
    }

    #[test]
    fn endpoint_derivatives_vanish_for_every_order() {
        for k in 1..=8u32 {
            let p = smoothstep_profile(k).unwrap();
            for r in 1..=k as usize {
                assert_eq!(p.endpoint_derivative(r, false), 0.0, "k={k} r={r}");
                assert_eq!(p.endpoint_derivative(r, true), 0.0, "k={k} r={r}");
                assert!(p.value(0.0, r).abs() < 1e-12);
                assert!(p.value(1.0, r).abs() < 1e-12);
            }
            assert_ne!(p.endpoint_derivative(k as usize + 1, false), 0.0);
        }
    }

    #[test]
    fn endpoint_conditions_by_finite_differences() {
        // one-sided difference of the profile itself: x(h) − x(0) = O(h^{k+1})
        for k in 1..=4u32 {
            let p = smoothstep_profile(k).unwrap();
            let h: f64 = 1e-3;
            let start = p.value(h, 0) - p.value(0.0, 0);
            let end = p.value(1.0, 0) - p.value(1.0 - h, 0);
            let bound = 10.0 * (h.powi(k as i32 + 1)) * p.endpoint_derivative(k as usize + 1, false).abs();
            assert!(start.abs() <= bound && end.abs() <= bound, "k={k}");
        }
    }

    #[test]
    fn analytic_derivatives_match_central_differences() {
        let profiles = [
            smoothstep_profile(1).unwrap(),
            smoothstep_profile(3).unwrap(),
            smoothstep_profile(5).unwrap(),
            sinusoidal_profile(),
        ];
        for p in &profiles {
            for order in 1..=6 {
                for i in 1..=100 {
                    let s = i as f64 / 101.0;
                    let h = 1e-5;
                    let fd = (p.value(s + h, order - 1) - p.value(s - h, order - 1)) / (2.0 * h);
                    let exact = p.value(s, order);
                    let scale = (1..=order).map(|r| p.value(0.5, r).abs()).fold(1.0, f64::max);
                    let err = (fd - exact).abs();
                    assert!(
                        err <= 1e-6 * exact.abs().max(1e-3 * scale),
                        "{p} order={order} s={s} fd={fd} exact={exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn eval_profile_rejects_out_of_range() {
        let p = smoothstep_profile(3).unwrap();
        assert!(eval_profile(&p, -0.01, 0).is_err());
        assert!(eval_profile(&p, 1.01, 0).is_err());
        assert!(eval_profile(&p, 1.0, 6).is_ok());
    }

    #[test]
    fn plan_kinematics() {
        let p = smoothstep_profile(3).unwrap();
        let plan = make_plan(p.clone(), 5.6e-6, 100e-6, PlanPurpose::Transport).unwrap();
        assert_eq!(plan.velocity(0.0), 0.0);
        assert_eq!(plan.velocity(100e-6), 0.0);
        assert_relative_eq!(plan.position(50e-6), 2.8e-6, max_relative = 1e-14);
        let t = 30e-6;
        assert_relative_eq!(plan.acceleration(t), 5.6e-6 / 1e-8 * p.value(0.3, 2), max_relative = 1e-14);
        assert_eq!(plan.position(1.0), 5.6e-6);

        let still = make_plan(p, 0.0, 100e-6, PlanPurpose::Transport).unwrap();
        for i in 0..=10 {
            let t = i as f64 * 1e-5;
            assert_eq!(still.position(t), 0.0);
            assert_eq!(still.acceleration(t), 0.0);
        }
    }

    #[test]
    fn plan_validation() {
        let p = sinusoidal_profile();
        assert!(make_plan(p.clone(), 1e-6, 0.0, PlanPurpose::Transport).is_err());
        assert!(make_plan(p.clone(), -1e-6, 1e-5, PlanPurpose::Transport).is_err());
        assert!(make_plan(p, 0.0, 1e-5, PlanPurpose::AmplitudeExchange).is_ok());
    }

    #[test]
    fn profile_names_round_trip() {
        for name in ["smoothstep:0", "smoothstep:3", "sinusoidal"] {
            let p: MotionProfile = name.parse().unwrap();
            assert_eq!(p.to_string(), name);
        }
        assert!("smoothstep:x".parse::<MotionProfile>().is_err());
        assert!("bezier".parse::<MotionProfile>().is_err());
        assert!("smoothstep:13".parse::<MotionProfile>().is_err());
    }

    fn any_profile() -> impl Strategy<Value = MotionProfile> {
        prop_oneof![
            (0u32..=MAX_SMOOTHSTEP_ORDER).prop_map(|k| smoothstep_profile(k).unwrap()),
            Just(sinusoidal_profile()),
        ]
    }

    proptest! {
        #[test]
        fn symmetry(p in any_profile(), s in 0.0f64..=1.0) {
            let sum = p.value(s, 0) + p.value(1.0 - s, 0);
            prop_assert!((sum - 1.0).abs() <= 1e-12, "{} s={} sum={}", p, s, sum);
        }

        #[test]
        fn monotone(p in any_profile(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(p.value(lo, 0) <= p.value(hi, 0) + 1e-15);
            prop_assert!(p.value(a, 1) >= -1e-12);
        }
    }
}
