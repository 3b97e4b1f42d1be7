//! C ABI for the shuttle simulation core.
//!
//! Conventions:
//! * every fallible function returns a [`ShuttleStatus`] and writes results
//!   through out-pointers, which are left untouched on failure;
//! * the message of the last failure on the calling thread is available from
//!   [`shuttle_last_error_message`];
//! * objects created by `*_new` functions are owned by the caller and must be
//!   released with the matching `*_free`;
//! * all quantities are SI (Kelvin, meters, seconds, rad/s) unless a name says
//!   otherwise.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shuttle_core::inference::{self, DataPoint, SurvivalModel};
use shuttle_core::spectral::{self, BudgetInputs, ScalingLaw, TransportReference};
use shuttle_core::trajectories::{sinusoidal_profile, smoothstep_profile, MotionPlan, MotionProfile, PlanPurpose};
use shuttle_core::{phys, Error, ThermalState, TrapConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShuttleStatus {
    Ok = 0,
    /// Argument outside the domain of the operation.
    DomainError = 1,
    /// Inconsistent or insufficient parameters.
    ParameterError = 2,
    /// Iteration failed to converge or a numerical limit was hit.
    NumericalError = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// Unexpected internal failure (including a caught panic).
    InternalError = 5,
}

/// Opaque trap configuration.
pub struct ShuttleTrap {
    inner: TrapConfig,
}

/// Opaque motion profile.
pub struct ShuttleProfile {
    inner: MotionProfile,
}

/// Heating budget inputs. `law_order < 0` selects the sinusoidal law,
/// otherwise the smoothstep law of that order.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ShuttleBudgetInputs {
    pub basic_per_exchange: f64,
    pub alpha: f64,
    pub delta_x_start: f64,
    pub delta_x_target: f64,
    pub delta_t_ref: f64,
    pub distance_ref: f64,
    pub time_ref: f64,
    pub distance: f64,
    pub time: f64,
    pub law_order: i32,
}

/// Heating budget terms, Kelvin.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ShuttleBudget {
    pub basic_1: f64,
    pub mis_1: f64,
    pub transport: f64,
    pub basic_2: f64,
    pub mis_2: f64,
    pub total: f64,
}

/// Fitted `F(n) = f0 · f^n`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ShuttleFidelityFit {
    pub f0: f64,
    pub f: f64,
    pub sigma_f0: f64,
    pub sigma_f: f64,
    pub converged: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ShuttleStatus {
    match e {
        Error::Domain(_) => ShuttleStatus::DomainError,
        Error::Parameter(_) | Error::Config(_) => ShuttleStatus::ParameterError,
        Error::Numerical(_) => ShuttleStatus::NumericalError,
        _ => ShuttleStatus::InternalError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), ShuttleStatus>) -> ShuttleStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ShuttleStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            ShuttleStatus::InternalError
        }
    }
}

fn core<T>(r: shuttle_core::Result<T>) -> Result<T, ShuttleStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> ShuttleStatus {
    set_error(format!("{what} is null"));
    ShuttleStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, ShuttleStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), ShuttleStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Creates a trap from an angular frequency, a depth (Kelvin) and a mass (kg).
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn shuttle_trap_new(
    omega0: f64,
    depth_u0: f64,
    mass: f64,
    out: *mut *mut ShuttleTrap,
) -> ShuttleStatus {
    guard(|| {
        let trap = core(TrapConfig::new(omega0, depth_u0, mass))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(Box::into_raw(Box::new(ShuttleTrap { inner: trap })));
        Ok(())
    })
}

/// Creates a ⁸⁷Rb trap whose ω₀ gives the 2D ground-state fraction
/// `fraction` at `temperature`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn shuttle_trap_new_calibrated(
    temperature: f64,
    fraction: f64,
    depth_u0: f64,
    out: *mut *mut ShuttleTrap,
) -> ShuttleStatus {
    guard(|| {
        let trap = core(TrapConfig::rb87_calibrated(temperature, fraction, depth_u0))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(Box::into_raw(Box::new(ShuttleTrap { inner: trap })));
        Ok(())
    })
}

/// Releases a trap. Null is ignored.
///
/// # Safety
/// `trap` must come from a `shuttle_trap_new*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn shuttle_trap_free(trap: *mut ShuttleTrap) {
    if !trap.is_null() {
        drop(Box::from_raw(trap));
    }
}

/// # Safety
/// `trap` must be a live trap handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_trap_omega0(trap: *const ShuttleTrap, out: *mut f64) -> ShuttleStatus {
    guard(|| write(out, deref(trap, "trap")?.inner.omega0(), "out"))
}

/// `sqrt(ħ / (2 m ω₀))`, meters.
///
/// # Safety
/// `trap` must be a live trap handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_zero_point_length(trap: *const ShuttleTrap, out: *mut f64) -> ShuttleStatus {
    guard(|| write(out, phys::zero_point_length(&deref(trap, "trap")?.inner), "out"))
}

/// 2D radial ground-state fraction at `temperature`.
///
/// # Safety
/// `trap` must be a live trap handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_gs_fraction_2d(
    trap: *const ShuttleTrap,
    temperature: f64,
    out: *mut f64,
) -> ShuttleStatus {
    guard(|| {
        let trap = deref(trap, "trap")?;
        let state = core(ThermalState::new(temperature))?;
        write(out, phys::gs_fraction_2d(&state, &trap.inner), "out")
    })
}

/// Angular frequency giving the 2D ground-state fraction `fraction` at
/// `temperature`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_calibrate_omega(temperature: f64, fraction: f64, out: *mut f64) -> ShuttleStatus {
    guard(|| write(out, core(phys::calibrate_omega(temperature, fraction))?, "out"))
}

/// Smoothstep profile of order `k` (`k <= 12`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_profile_smoothstep(k: u32, out: *mut *mut ShuttleProfile) -> ShuttleStatus {
    guard(|| {
        let p = core(smoothstep_profile(k))?;
        write(out, Box::into_raw(Box::new(ShuttleProfile { inner: p })), "out")
    })
}

/// `s − sin(2πs)/(2π)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_profile_sinusoidal(out: *mut *mut ShuttleProfile) -> ShuttleStatus {
    guard(|| write(out, Box::into_raw(Box::new(ShuttleProfile { inner: sinusoidal_profile() })), "out"))
}

/// Releases a profile. Null is ignored.
///
/// # Safety
/// `profile` must come from a `shuttle_profile_*` constructor and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn shuttle_profile_free(profile: *mut ShuttleProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// `d^order p / ds^order` at `s ∈ [0, 1]`.
///
/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_profile_eval(
    profile: *const ShuttleProfile,
    s: f64,
    order: u32,
    out: *mut f64,
) -> ShuttleStatus {
    guard(|| {
        let p = deref(profile, "profile")?;
        write(out, core(shuttle_core::trajectories::eval_profile(&p.inner, s, order as usize))?, "out")
    })
}

/// Mean phonon gain (and its temperature equivalent in Kelvin) of moving the
/// trap by `distance` meters in `duration` seconds along `profile`.
/// `out_delta_t` may be null.
///
/// # Safety
/// Handles must be live; `out_delta_n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_delta_n(
    trap: *const ShuttleTrap,
    profile: *const ShuttleProfile,
    distance: f64,
    duration: f64,
    out_delta_n: *mut f64,
    out_delta_t: *mut f64,
) -> ShuttleStatus {
    guard(|| {
        let trap = deref(trap, "trap")?;
        let profile = deref(profile, "profile")?;
        if out_delta_n.is_null() {
            return Err(null("out_delta_n"));
        }
        let plan = core(MotionPlan::new(profile.inner.clone(), distance, duration, PlanPurpose::Transport))?;
        let h = spectral::delta_n(&plan, &trap.inner);
        out_delta_n.write(h.delta_n);
        if !out_delta_t.is_null() {
            out_delta_t.write(h.delta_t);
        }
        Ok(())
    })
}

/// Truncated-Boltzmann survival after `n` cycles. Temperatures in Kelvin.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_survival_prob(
    p0: f64,
    t0: f64,
    delta_t: f64,
    u0: f64,
    n: f64,
    out: *mut f64,
) -> ShuttleStatus {
    guard(|| {
        let model = core(SurvivalModel::new(p0, t0, delta_t, u0))?;
        if !(n >= 0.0 && n.is_finite()) {
            set_error(format!("cycle count must be finite and >= 0, got {n}"));
            return Err(ShuttleStatus::DomainError);
        }
        write(out, inference::survival_prob(&model, n), "out")
    })
}

/// # Safety
/// `trap` must be a live handle; `inputs` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_heating_budget(
    trap: *const ShuttleTrap,
    inputs: *const ShuttleBudgetInputs,
    out: *mut ShuttleBudget,
) -> ShuttleStatus {
    guard(|| {
        let trap = deref(trap, "trap")?;
        let i = *deref(inputs, "inputs")?;
        let law = match u32::try_from(i.law_order) {
            Ok(k) => ScalingLaw::Smoothstep(k),
            Err(_) => ScalingLaw::Sinusoidal,
        };
        let b = core(spectral::heating_budget(
            &trap.inner,
            &BudgetInputs {
                basic_per_exchange: i.basic_per_exchange,
                alpha: i.alpha,
                delta_x_start: i.delta_x_start,
                delta_x_target: i.delta_x_target,
                reference: TransportReference {
                    delta_t_ref: i.delta_t_ref,
                    distance_ref: i.distance_ref,
                    time_ref: i.time_ref,
                },
                distance: i.distance,
                time: i.time,
                law,
            },
        ))?;
        write(
            out,
            ShuttleBudget {
                basic_1: b.basic_1,
                mis_1: b.mis_1,
                transport: b.transport,
                basic_2: b.basic_2,
                mis_2: b.mis_2,
                total: b.total,
            },
            "out",
        )
    })
}

/// `dx_start² + dx_target²`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_combine_mismatch(dx_start: f64, dx_target: f64, out: *mut f64) -> ShuttleStatus {
    guard(|| write(out, core(inference::combine_mismatch(dx_start, dx_target))?, "out"))
}

/// AOD frequency change (MHz) to displacement (μm).
#[no_mangle]
pub extern "C" fn shuttle_freq_to_position(delta_f_mhz: f64) -> f64 {
    inference::freq_to_position(delta_f_mhz)
}

/// Weighted fit of `F(n) = f0 · f^n`. `sigma` may be null for an
/// unweighted fit.
///
/// # Safety
/// `n` and `fidelity` (and `sigma` when non-null) must point to `len`
/// readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shuttle_fit_fidelity_decay(
    n: *const f64,
    fidelity: *const f64,
    sigma: *const f64,
    len: usize,
    out: *mut ShuttleFidelityFit,
) -> ShuttleStatus {
    guard(|| {
        if n.is_null() {
            return Err(null("n"));
        }
        if fidelity.is_null() {
            return Err(null("fidelity"));
        }
        let xs = std::slice::from_raw_parts(n, len);
        let ys = std::slice::from_raw_parts(fidelity, len);
        let sig = if sigma.is_null() { None } else { Some(std::slice::from_raw_parts(sigma, len)) };
        let pts: Vec<DataPoint> = (0..len).map(|i| DataPoint::new(xs[i], ys[i], sig.map(|s| s[i]))).collect();
        let fit = core(inference::fit_fidelity_decay(&pts))?;
        write(
            out,
            ShuttleFidelityFit {
                f0: fit.get("f0"),
                f: fit.get("f"),
                sigma_f0: fit.sigma("f0"),
                sigma_f: fit.sigma("f"),
                converged: fit.converged,
            },
            "out",
        )
    })
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn shuttle_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn shuttle_version() -> *const c_char {
    VERSION.as_ptr().cast()
}
