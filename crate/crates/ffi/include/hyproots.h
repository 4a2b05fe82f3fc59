#ifndef HYPROOTS_H
#define HYPROOTS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum HyprootsStatus {
  HYPROOTS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HYPROOTS_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  HYPROOTS_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed curve description or rational.
   */
  HYPROOTS_STATUS_PARSE = 3,
  /**
   * Well-formed input the operation cannot accept.
   */
  HYPROOTS_STATUS_INVALID = 4,
  /**
   * The operation needs the other curve mode.
   */
  HYPROOTS_STATUS_MODE_MISMATCH = 5,
  /**
   * A numeric step did not converge or could not decide.
   */
  HYPROOTS_STATUS_NUMERIC = 6,
  /**
   * The analysis finished but its hypotheses are not met; outputs are
   * still written.
   */
  HYPROOTS_STATUS_HYPOTHESES_UNMET = 7,
  HYPROOTS_STATUS_INTERNAL = 8,
  /**
   * A panic was caught at the boundary.
   */
  HYPROOTS_STATUS_PANIC = 9,
} HyprootsStatus;

/**
 * Opaque curve handle.
 */
typedef struct HyprootsCurve HyprootsCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON curve description into a new handle stored in `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HyprootsStatus hyproots_curve_from_json(const char *json, struct HyprootsCurve **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `curve` must come from [`hyproots_curve_from_json`] and not be used
 * afterwards.
 */
void hyproots_curve_free(struct HyprootsCurve *curve);

/**
 * Degree of the curve, or 0 for a null handle.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
uint32_t hyproots_curve_degree(const struct HyprootsCurve *curve);

/**
 * Regularity report over the curve's domain as JSON in `*out_json`.
 * Returns `HypothesesUnmet` with the report still written when the
 * analysis found failed hypotheses.
 *
 * # Safety
 * `curve` must be a live handle and `out_json` a valid pointer.
 */
enum HyprootsStatus hyproots_analyze_json(const struct HyprootsCurve *curve, char **out_json);

/**
 * `Γ` and `γ` at `t0 = num/den`.
 *
 * # Safety
 * `curve` must be a live handle; `big` and `small` valid pointers.
 */
enum HyprootsStatus hyproots_gamma_at(const struct HyprootsCurve *curve,
                                      int64_t num,
                                      int64_t den,
                                      uint32_t *big,
                                      uint32_t *small);

/**
 * Desingularization exponents at `t0 = num/den` (complex mode).
 *
 * # Safety
 * `curve` must be a live handle; `n_left` and `n_right` valid pointers.
 */
enum HyprootsStatus hyproots_desing_at(const struct HyprootsCurve *curve,
                                       int64_t num,
                                       int64_t den,
                                       uint64_t *n_left,
                                       uint64_t *n_right);

/**
 * `d(n) = n(n+1)/2 - 1`, the largest total of labels ≥ 2 over reduction
 * trees of degree `n`.
 */
uint64_t hyproots_d(uint32_t n);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hyproots_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *hyproots_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPROOTS_H */
