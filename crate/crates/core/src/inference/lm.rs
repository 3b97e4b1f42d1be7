//! Levenberg–Marquardt on weighted residuals.

use nalgebra::{DMatrix, DVector};

pub(crate) const MAX_ITERATIONS: usize = 200;
pub(crate) const STEP_TOLERANCE: f64 = 1e-8;

/// Residuals `r(x)` (already divided by their standard errors) and the
/// Jacobian `∂r/∂x`. `None` marks a point where the model is undefined.
pub(crate) type Evaluation = Option<(DVector<f64>, DMatrix<f64>)>;

#[derive(Debug, Clone)]
pub(crate) struct LmOutcome {
    pub x: DVector<f64>,
    /// Inverse of `JᵀJ` at the solution, not yet scaled by the residual
    /// variance; `None` when singular.
    pub inverse_hessian: Option<DMatrix<f64>>,
    pub ssr: f64,
    pub converged: bool,
    pub iterations: usize,
    pub diagnostics: Vec<String>,
}

fn relative_step(step: &DVector<f64>, x: &DVector<f64>, scale: &DVector<f64>) -> f64 {
    step.iter().zip(x.iter().zip(scale.iter())).map(|(d, (x, s))| d.abs() / x.abs().max(*s)).fold(0.0, f64::max)
}

fn solve_damped(a: &DMatrix<f64>, g: &DVector<f64>, lambda: f64) -> Option<DVector<f64>> {
    let mut m = a.clone();
    for i in 0..m.nrows() {
        let d = a[(i, i)];
        m[(i, i)] = d + lambda * d.max(1e-300);
    }
    m.cholesky().map(|c| c.solve(&(-g)))
}

/// Minimises `‖r(x)‖²` from `x0`.
///
/// `scale` gives a magnitude per parameter below which step sizes are
/// judged absolutely rather than relative to `|x|`. The fit is declared
/// converged when an accepted step, or the undamped Gauss–Newton step at the
/// current point, changes every parameter by less than `1e-8` relative.
pub(crate) fn levenberg_marquardt(
    eval: impl Fn(&DVector<f64>) -> Evaluation,
    x0: DVector<f64>,
    scale: DVector<f64>,
) -> LmOutcome {
    let mut diagnostics = Vec::new();
    let mut x = x0;
    let Some((mut r, mut j)) = eval(&x) else {
        return LmOutcome {
            ssr: f64::NAN,
            x,
            inverse_hessian: None,
            converged: false,
            iterations: 0,
            diagnostics: vec!["model undefined at the initial point".into()],
        };
    };
    let mut ssr = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    'outer: while iterations < MAX_ITERATIONS {
        iterations += 1;
        let a = j.transpose() * &j;
        let g = j.transpose() * &r;

        if let Some(gn) = solve_damped(&a, &g, 0.0) {
            if relative_step(&gn, &x, &scale) < STEP_TOLERANCE {
                converged = true;
                break;
            }
        }

        loop {
            let Some(step) = solve_damped(&a, &g, lambda) else {
                lambda *= 10.0;
                if lambda > 1e16 {
                    diagnostics.push("normal equations are singular".into());
                    break 'outer;
                }
                continue;
            };
            let candidate = &x + &step;
            match eval(&candidate) {
                Some((r_new, j_new)) if r_new.norm_squared().is_finite() && r_new.norm_squared() <= ssr => {
                    let rel = relative_step(&step, &x, &scale);
                    x = candidate;
                    r = r_new;
                    j = j_new;
                    ssr = r.norm_squared();
                    lambda = (lambda / 3.0).max(1e-12);
                    if rel < STEP_TOLERANCE {
                        converged = true;
                        break 'outer;
                    }
                    break;
                }
                _ => {
                    lambda *= 4.0;
                    if lambda > 1e16 {
                        diagnostics.push("damping exceeded 1e16 without reducing the residual".into());
                        break 'outer;
                    }
                }
            }
        }
    }
    if !converged && iterations >= MAX_ITERATIONS {
        diagnostics.push(format!("no convergence after {MAX_ITERATIONS} iterations"));
    }
    let inverse_hessian = (j.transpose() * &j).try_inverse().filter(|m| m.iter().all(|v| v.is_finite()));
    if inverse_hessian.is_none() {
        diagnostics.push("curvature matrix is singular; uncertainties unavailable".into());
    }
    LmOutcome { x, inverse_hessian, ssr, converged, iterations, diagnostics }
}

/// Central-difference Jacobian of `residuals`, with steps relative to
/// `max(|x_i|, scale_i)`.
pub(crate) fn numeric(
    residuals: impl Fn(&DVector<f64>) -> Option<DVector<f64>>,
    scale: DVector<f64>,
) -> impl Fn(&DVector<f64>) -> Evaluation {
    move |x: &DVector<f64>| {
        let r = residuals(x)?;
        let mut j = DMatrix::zeros(r.len(), x.len());
        for i in 0..x.len() {
            let h = 6e-6 * x[i].abs().max(scale[i]);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let rp = residuals(&xp)?;
            let rm = residuals(&xm)?;
            j.set_column(i, &((rp - rm) / (xp[i] - xm[i])));
        }
        Some((r, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_round_trip() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * (-0.7 * x).exp()).collect();
        let res = |p: &DVector<f64>| {
            Some(DVector::from_iterator(xs.len(), xs.iter().zip(&ys).map(|(x, y)| p[0] * (-p[1] * x).exp() - y)))
        };
        let scale = DVector::from_vec(vec![1.0, 1.0]);
        let out = levenberg_marquardt(numeric(res, scale.clone()), DVector::from_vec(vec![1.0, 0.1]), scale);
        assert!(out.converged, "{:?}", out.diagnostics);
        assert!((out.x[0] - 2.5).abs() < 1e-9 && (out.x[1] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn singular_problem_reports() {
        // two parameters that only enter as a sum
        let res = |p: &DVector<f64>| Some(DVector::from_vec(vec![p[0] + p[1] - 1.0, p[0] + p[1] - 1.0]));
        let scale = DVector::from_vec(vec![1.0, 1.0]);
        let out = levenberg_marquardt(numeric(res, scale.clone()), DVector::from_vec(vec![0.0, 0.0]), scale);
        assert!(out.inverse_hessian.is_none());
    }
}
