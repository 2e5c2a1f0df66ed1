#ifndef HYPERBASIS_H
#define HYPERBASIS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define HB_OK 0

/**
 * A required pointer argument was null.
 */
#define HB_ERR_NULL 1

/**
 * Bad configuration: unknown name, invalid UTF-8, out-of-range option.
 */
#define HB_ERR_CONFIG 2

/**
 * Argument outside the mathematical domain.
 */
#define HB_ERR_DOMAIN 3

/**
 * Series, quadrature or special-function failure.
 */
#define HB_ERR_NUMERICAL 4

/**
 * Internal error or caught panic.
 */
#define HB_ERR_INTERNAL 5

#define HB_PARITY_EVEN 0

#define HB_PARITY_ODD 1

/**
 * A finished contraction sweep.
 */
typedef struct HbCurve HbCurve;

/**
 * One basis at fixed spectral parameters.
 */
typedef struct HbWavefunction HbWavefunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null if there was none.
 * The caller owns the string.
 */
char *hb_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void hb_string_free(char *s);

/**
 * Library version; the caller owns the string.
 */
char *hb_version(void);

/**
 * Creates a wavefunction handle. `basis` is one of "ho", "ps", "eq+",
 * "eq-", "eq1", "eq2"; `label` is s, m or ν accordingly (m must be an
 * integer).
 *
 * # Safety
 * `basis` must be a NUL-terminated string and `out` a valid pointer.
 */
uint32_t hb_wavefunction_new(const char *basis,
                             double radius,
                             double rho,
                             double label,
                             struct HbWavefunction **out);

/**
 * Evaluates at chart coordinates: (x̃, ỹ) for ho, (τ, φ) for ps, (τ₁, τ₂)
 * for the equidistant families.
 *
 * # Safety
 * `h` must be a live handle; `re`, `im` valid pointers.
 */
uint32_t hb_wavefunction_eval(const struct HbWavefunction *h,
                              double c1,
                              double c2,
                              double *re,
                              double *im);

/**
 * # Safety
 * `h` must come from `hb_wavefunction_new` (or be null) and not be used afterwards.
 */
void hb_wavefunction_free(struct HbWavefunction *h);

/**
 * 𝒲^{ν(±)}_{ρs}.
 *
 * # Safety
 * `re`, `im` must be valid pointers.
 */
uint32_t hb_coeff_w(double rho, double s, double nu, int32_t par, double *re, double *im);

/**
 * 𝒰^{m(±)}_{ρν}; `route` is "wilson" (null selects it) or "mu_integral".
 *
 * # Safety
 * `route` null or a NUL-terminated string; `re`, `im` valid pointers.
 */
uint32_t hb_coeff_u(double rho,
                    double nu,
                    int64_t m,
                    int32_t par,
                    const char *route,
                    double *re,
                    double *im);

/**
 * 𝒱^m_{ρs}; `route` is "laguerre_series" (null selects it), "nu_integral"
 * or "phi_integral".
 *
 * # Safety
 * `route` null or a NUL-terminated string; `re`, `im` valid pointers.
 */
uint32_t hb_coeff_v(double rho, double s, int64_t m, const char *route, double *re, double *im);

/**
 * Runs the identity suite for `filter` ("*" or a comma list of families or
 * ids). Writes the report count and the number of failures, and, if
 * `jsonl` is non-null, the reports as JSON lines (caller frees).
 *
 * # Safety
 * `filter` must be a NUL-terminated string; out-pointers valid or null
 * where documented.
 */
uint32_t hb_verify(const char *filter, uint32_t *total, uint32_t *failed, char **jsonl);

/**
 * Runs a contraction sweep over `r_values` (at least 4, ascending) with
 * the default probe grids. `target` is "ps", "eq+", "eq-", "ho", "u+",
 * "u-", "w" or "v". Parameters by target: ps uses (k, m); eq± uses (k,
 * a = k₁); ho uses (k, a = k₂); u± uses (k, m); w uses (k, a = k₁,
 * b = k₂'); v uses (k, a = k₂, m).
 *
 * # Safety
 * `target` NUL-terminated, `r_values` valid for `n` reads, `out` valid.
 */
uint32_t hb_contract(const char *target,
                     double k,
                     double a,
                     double b,
                     int64_t m,
                     const double *r_values,
                     size_t n,
                     struct HbCurve **out);

/**
 * Number of R values in the curve (0 for a null handle).
 *
 * # Safety
 * `h` null or a live handle.
 */
size_t hb_curve_len(const struct HbCurve *h);

/**
 * R value and error at index `i`.
 *
 * # Safety
 * `h` a live handle; `r`, `err` valid pointers.
 */
uint32_t hb_curve_point(const struct HbCurve *h, size_t i, double *r, double *err);

/**
 * Fitted exponent and prefactor of error ≈ prefactor·R^exponent.
 *
 * # Safety
 * `h` a live handle; out-pointers valid.
 */
uint32_t hb_curve_fit(const struct HbCurve *h, double *exponent, double *prefactor);

/**
 * # Safety
 * `h` must come from `hb_contract` (or be null) and not be used afterwards.
 */
void hb_curve_free(struct HbCurve *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERBASIS_H */
