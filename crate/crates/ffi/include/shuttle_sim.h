/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SHUTTLE_SIM_H
#define SHUTTLE_SIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum ShuttleStatus {
  SHUTTLE_STATUS_OK = 0,
  /**
   * Argument outside the domain of the operation.
   */
  SHUTTLE_STATUS_DOMAIN_ERROR = 1,
  /**
   * Inconsistent or insufficient parameters.
   */
  SHUTTLE_STATUS_PARAMETER_ERROR = 2,
  /**
   * Iteration failed to converge or a numerical limit was hit.
   */
  SHUTTLE_STATUS_NUMERICAL_ERROR = 3,
  /**
   * A required pointer argument was null.
   */
  SHUTTLE_STATUS_NULL_POINTER = 4,
  /**
   * Unexpected internal failure (including a caught panic).
   */
  SHUTTLE_STATUS_INTERNAL_ERROR = 5,
} ShuttleStatus;

/**
 * Opaque motion profile.
 */
typedef struct ShuttleProfile ShuttleProfile;

/**
 * Opaque trap configuration.
 */
typedef struct ShuttleTrap ShuttleTrap;

/**
 * Heating budget inputs. `law_order < 0` selects the sinusoidal law,
 * otherwise the smoothstep law of that order.
 */
typedef struct ShuttleBudgetInputs {
  double basic_per_exchange;
  double alpha;
  double delta_x_start;
  double delta_x_target;
  double delta_t_ref;
  double distance_ref;
  double time_ref;
  double distance;
  double time;
  int32_t law_order;
} ShuttleBudgetInputs;

/**
 * Heating budget terms, Kelvin.
 */
typedef struct ShuttleBudget {
  double basic_1;
  double mis_1;
  double transport;
  double basic_2;
  double mis_2;
  double total;
} ShuttleBudget;

/**
 * Fitted `F(n) = f0 · f^n`.
 */
typedef struct ShuttleFidelityFit {
  double f0;
  double f;
  double sigma_f0;
  double sigma_f;
  bool converged;
} ShuttleFidelityFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a trap from an angular frequency, a depth (Kelvin) and a mass (kg).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum ShuttleStatus shuttle_trap_new(double omega0,
                                    double depth_u0,
                                    double mass,
                                    struct ShuttleTrap **out);

/**
 * Creates a ⁸⁷Rb trap whose ω₀ gives the 2D ground-state fraction
 * `fraction` at `temperature`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum ShuttleStatus shuttle_trap_new_calibrated(double temperature,
                                               double fraction,
                                               double depth_u0,
                                               struct ShuttleTrap **out);

/**
 * Releases a trap. Null is ignored.
 *
 * # Safety
 * `trap` must come from a `shuttle_trap_new*` call and not be freed twice.
 */
void shuttle_trap_free(struct ShuttleTrap *trap);

/**
 * # Safety
 * `trap` must be a live trap handle; `out` must be writable.
 */
enum ShuttleStatus shuttle_trap_omega0(const struct ShuttleTrap *trap, double *out);

/**
 * `sqrt(ħ / (2 m ω₀))`, meters.
 *
 * # Safety
 * `trap` must be a live trap handle; `out` must be writable.
 */
enum ShuttleStatus shuttle_zero_point_length(const struct ShuttleTrap *trap, double *out);

/**
 * 2D radial ground-state fraction at `temperature`.
 *
 * # Safety
 * `trap` must be a live trap handle; `out` must be writable.
 */
enum ShuttleStatus shuttle_gs_fraction_2d(const struct ShuttleTrap *trap,
                                          double temperature,
                                          double *out);

/**
 * Angular frequency giving the 2D ground-state fraction `fraction` at
 * `temperature`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ShuttleStatus shuttle_calibrate_omega(double temperature, double fraction, double *out);

/**
 * Smoothstep profile of order `k` (`k <= 12`).
 *
 * # Safety
 * `out` must be writable.
 */
enum ShuttleStatus shuttle_profile_smoothstep(uint32_t k, struct ShuttleProfile **out);

/**
 * `s − sin(2πs)/(2π)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ShuttleStatus shuttle_profile_sinusoidal(struct ShuttleProfile **out);

/**
 * Releases a profile. Null is ignored.
 *
 * # Safety
 * `profile` must come from a `shuttle_profile_*` constructor and not be
 * freed twice.
 */
void shuttle_profile_free(struct ShuttleProfile *profile);

/**
 * `d^order p / ds^order` at `s ∈ [0, 1]`.
 *
 * # Safety
 * `profile` must be a live handle; `out` must be writable.
 */
enum ShuttleStatus shuttle_profile_eval(const struct ShuttleProfile *profile,
                                        double s,
                                        uint32_t order,
                                        double *out);

/**
 * Mean phonon gain (and its temperature equivalent in Kelvin) of moving the
 * trap by `distance` meters in `duration` seconds along `profile`.
 * `out_delta_t` may be null.
 *
 * # Safety
 * Handles must be live; `out_delta_n` must be writable.
 */
enum ShuttleStatus shuttle_delta_n(const struct ShuttleTrap *trap,
                                   const struct ShuttleProfile *profile,
                                   double distance,
                                   double duration,
                                   double *out_delta_n,
                                   double *out_delta_t);

/**
 * Truncated-Boltzmann survival after `n` cycles. Temperatures in Kelvin.
 *
 * # Safety
 * `out` must be writable.
 */
enum ShuttleStatus shuttle_survival_prob(double p0,
                                         double t0,
                                         double delta_t,
                                         double u0,
                                         double n,
                                         double *out);

/**
 * # Safety
 * `trap` must be a live handle; `inputs` readable; `out` writable.
 */
enum ShuttleStatus shuttle_heating_budget(const struct ShuttleTrap *trap,
                                          const struct ShuttleBudgetInputs *inputs,
                                          struct ShuttleBudget *out);

/**
 * `dx_start² + dx_target²`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ShuttleStatus shuttle_combine_mismatch(double dx_start, double dx_target, double *out);

/**
 * AOD frequency change (MHz) to displacement (μm).
 */
double shuttle_freq_to_position(double delta_f_mhz);

/**
 * Weighted fit of `F(n) = f0 · f^n`. `sigma` may be null for an
 * unweighted fit.
 *
 * # Safety
 * `n` and `fidelity` (and `sigma` when non-null) must point to `len`
 * readable values; `out` must be writable.
 */
enum ShuttleStatus shuttle_fit_fidelity_decay(const double *n,
                                              const double *fidelity,
                                              const double *sigma,
                                              uintptr_t len,
                                              struct ShuttleFidelityFit *out);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *shuttle_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *shuttle_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHUTTLE_SIM_H */
