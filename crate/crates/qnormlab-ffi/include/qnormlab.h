#ifndef QNORMLAB_H
#define QNORMLAB_H

/* Generated from the qnormlab-ffi sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of every call crossing the boundary.
 */
typedef enum QnlStatus {
  QNL_STATUS_OK = 0,
  QNL_STATUS_NULL_POINTER = 1,
  QNL_STATUS_INVALID_ARGUMENT = 2,
  QNL_STATUS_CONSTRUCTION_FAILED = 3,
  QNL_STATUS_VERIFICATION_FAILED = 4,
  QNL_STATUS_OUT_OF_SPAN = 5,
  QNL_STATUS_NO_WITNESS = 6,
  QNL_STATUS_INVALID_UTF8 = 7,
  QNL_STATUS_JSON_ERROR = 8,
  QNL_STATUS_INTERNAL_ERROR = 9,
} QnlStatus;

/**
 * Opaque handle to a certified basis.
 */
typedef struct QnlBasis QnlBasis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a certified basis of `length` elements over the ball of the given
 * radius, with default construction parameters; `margin` of 0 selects the
 * model default. The handle is written to `out` on success.
 *
 * # Safety
 * `out` must be a valid pointer; the result must be released with
 * [`qnl_basis_free`].
 */
enum QnlStatus qnl_basis_build(double p,
                               double radius,
                               uintptr_t length,
                               double margin,
                               struct QnlBasis **out);

/**
 * Release a basis handle. A null pointer is a no-op.
 *
 * # Safety
 * `basis` must come from this library and must not be used afterwards.
 */
void qnl_basis_free(struct QnlBasis *basis);

/**
 * Number of built elements.
 *
 * # Safety
 * `basis` must be a live handle from this library.
 */
uintptr_t qnl_basis_len(const struct QnlBasis *basis);

/**
 * Re-verify every certificate of the basis.
 *
 * # Safety
 * `basis` must be a live handle from this library.
 */
enum QnlStatus qnl_basis_verify(const struct QnlBasis *basis);

/**
 * Serialize the basis; the string is written to `out`.
 *
 * # Safety
 * `basis` must be a live handle, `out` a valid pointer; release the string
 * with [`qnl_string_free`].
 */
enum QnlStatus qnl_basis_to_json(const struct QnlBasis *basis, char **out);

/**
 * Parse a basis from JSON and return a fresh handle through `out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` a valid pointer; the
 * result must be released with [`qnl_basis_free`].
 */
enum QnlStatus qnl_basis_from_json(const char *json, struct QnlBasis **out);

/**
 * Release a string returned by this library. A null pointer is a no-op.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void qnl_string_free(char *s);

/**
 * `Σ|x_i|^p` of the vector given as parallel arrays.
 *
 * # Safety
 * `indices`/`values` must hold `len` elements; `out` must be valid.
 */
enum QnlStatus qnl_fnorm(double p,
                         const uint32_t *indices,
                         const double *values,
                         uintptr_t len,
                         double *out);

/**
 * `sup_{‖z‖_p ≤ radius} |f(z)|` for the functional with the given
 * coefficients.
 *
 * # Safety
 * `indices`/`values` must hold `len` elements; `out` must be valid.
 */
enum QnlStatus qnl_dual_norm(double p,
                             double radius,
                             const uint32_t *indices,
                             const double *values,
                             uintptr_t len,
                             double *out);

/**
 * Induced norm `Σ|e*_i(x)|·d_i` of a span vector.
 *
 * # Safety
 * `basis` must be a live handle; `indices`/`values` must hold `len`
 * elements; `out` must be valid.
 */
enum QnlStatus qnl_basis_norm_e(const struct QnlBasis *basis,
                                const uint32_t *indices,
                                const double *values,
                                uintptr_t len,
                                double *out);

/**
 * `‖z‖_{(n,𝔞)}` with the constant exponent function 𝔞 ≡ `exponent`.
 *
 * # Safety
 * `basis` must be a live handle; `indices`/`values` must hold `len`
 * elements; `out` must be valid.
 */
enum QnlStatus qnl_basis_np_norm(const struct QnlBasis *basis,
                                 const uint32_t *indices,
                                 const double *values,
                                 uintptr_t len,
                                 uint32_t n,
                                 double exponent,
                                 double *out);

/**
 * Least m ≤ `m_max` with `‖x‖_{(m,𝔠)} > 2^{−m}`, written to `out`.
 *
 * # Safety
 * `basis` must be a live handle; `indices`/`values` must hold `len`
 * elements; `out` must be valid.
 */
enum QnlStatus qnl_basis_separation_witness(const struct QnlBasis *basis,
                                            const uint32_t *indices,
                                            const double *values,
                                            uintptr_t len,
                                            double exponent,
                                            uint32_t m_max,
                                            uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QNORMLAB_H */
