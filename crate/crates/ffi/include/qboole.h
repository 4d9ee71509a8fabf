#ifndef QBOOLE_H
#define QBOOLE_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum QbStatus {
  QB_STATUS_OK = 0,
  QB_STATUS_NULL_POINTER = 1,
  QB_STATUS_INVALID_UTF8 = 2,
  QB_STATUS_INVALID_ARGUMENT = 3,
  QB_STATUS_UNKNOWN_FAMILY = 4,
  QB_STATUS_UNSUPPORTED_ORDER = 5,
  QB_STATUS_UNKNOWN_CONSTRUCTION = 6,
  QB_STATUS_INVALID_PRIME = 7,
  QB_STATUS_Q_NOT_CONGRUENT = 8,
  QB_STATUS_PRECISION_OUT_OF_RANGE = 9,
  QB_STATUS_SUM_TOO_LARGE = 10,
  QB_STATUS_NOT_PADIC_UNIT = 11,
  QB_STATUS_INTERNAL = 99,
} QbStatus;

/**
 * Family codes accepted by `family` parameters.
 */
typedef enum QbFamily {
  QB_FAMILY_EULER = 0,
  QB_FAMILY_BOOLE_CLASSICAL = 1,
  QB_FAMILY_QBOOLE_FIRST = 2,
  QB_FAMILY_QBOOLE_SECOND = 3,
} QbFamily;

/**
 * Construction codes accepted by `construction` parameters.
 */
typedef enum QbConstruction {
  QB_CONSTRUCTION_SERIES = 0,
  QB_CONSTRUCTION_STIRLING_SUM = 1,
  QB_CONSTRUCTION_INTEGRAL = 2,
} QbConstruction;

/**
 * Audit profile codes.
 */
typedef enum QbProfile {
  QB_PROFILE_QUICK = 0,
  QB_PROFILE_FULL = 1,
} QbProfile;

/**
 * Stirling number kinds.
 */
typedef enum QbStirling {
  QB_STIRLING_FIRST_SIGNED = 0,
  QB_STIRLING_FIRST_UNSIGNED = 1,
  QB_STIRLING_SECOND = 2,
} QbStirling;

/**
 * Opaque polynomial in `x`, `lambda`, `q` with rational coefficients.
 */
typedef struct QbPoly QbPoly;

/**
 * Opaque audit report.
 */
typedef struct QbReport QbReport;

/**
 * Result of a p-adic integral check.
 */
typedef struct QbWittResult {
  bool pass;
  /**
   * Residue of the fermionic sum as a caller-owned decimal string.
   */
  char *integral;
  /**
   * Residue of the closed form as a caller-owned decimal string.
   */
  char *polynomial;
} QbWittResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qb_version(void);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *qb_last_error_message(void);

/**
 * Computes the degree-`n` member of a family of order `order`.
 *
 * `family_code` is a [`QbFamily`] value and `construction_code` a [`QbConstruction`]
 * value. On success `*out` receives a new handle.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum QbStatus qb_family_value(uint32_t family_code,
                              uint32_t order,
                              uint32_t n,
                              uint32_t construction_code,
                              struct QbPoly **out);

/**
 * Canonical plain-text rendering, e.g. `x^2 - x*lambda + 1/2*lambda*q`.
 *
 * # Safety
 * `poly` must be a live handle and `out` valid writable storage.
 */
enum QbStatus qb_poly_render(const struct QbPoly *poly, char **out);

/**
 * LaTeX rendering.
 *
 * # Safety
 * `poly` must be a live handle and `out` valid writable storage.
 */
enum QbStatus qb_poly_render_latex(const struct QbPoly *poly, char **out);

/**
 * Evaluates at rationals given as strings such as `"3"` or `"-1/2"`.
 * The exact result is written to `*out` in the same form.
 *
 * # Safety
 * `poly` must be a live handle, the inputs NUL-terminated strings and
 * `out` valid writable storage.
 */
enum QbStatus qb_poly_eval(const struct QbPoly *poly,
                           const char *x,
                           const char *lambda,
                           const char *q,
                           char **out);

/**
 * Writes whether two polynomials are identical.
 *
 * # Safety
 * Both handles must be live and `out` valid writable storage.
 */
enum QbStatus qb_poly_equal(const struct QbPoly *a, const struct QbPoly *b, bool *out);

/**
 * # Safety
 * `poly` must be null or a handle not yet freed.
 */
void qb_poly_free(struct QbPoly *poly);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void qb_string_free(char *s);

/**
 * Stirling number as a decimal string.
 *
 * # Safety
 * `out` must be valid writable storage.
 */
enum QbStatus qb_stirling(uint32_t kind, int64_t n, int64_t k, char **out);

/**
 * Runs the identity audit.
 *
 * # Safety
 * `out` must be valid writable storage.
 */
enum QbStatus qb_audit_run(uint32_t profile,
                           bool include_printed_variants,
                           uint64_t seed,
                           struct QbReport **out);

/**
 * Report as JSON. With `timing` false the output is byte-for-byte
 * reproducible for a fixed seed.
 *
 * # Safety
 * `report` must be a live handle and `out` valid writable storage.
 */
enum QbStatus qb_report_json(const struct QbReport *report, bool timing, char **out);

/**
 * # Safety
 * `report` must be a live handle and `out` valid writable storage.
 */
enum QbStatus qb_report_all_asserted_pass(const struct QbReport *report, bool *out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void qb_report_free(struct QbReport *report);

/**
 * Compares the fermionic p-adic integral of a family's integrand with
 * its closed form mod `p^precision`, summing to depth `p^depth`.
 *
 * The strings in `*out` are owned by the caller.
 *
 * # Safety
 * `out` must be valid writable storage.
 */
enum QbStatus qb_padic_witt_check(uint32_t family_code,
                                  uint32_t order,
                                  uint32_t n,
                                  int64_t x,
                                  int64_t lambda,
                                  int64_t q,
                                  uint64_t p,
                                  uint32_t depth,
                                  uint32_t precision,
                                  bool literal,
                                  struct QbWittResult *out);

/**
 * Releases the strings inside a [`QbWittResult`] and nulls them.
 *
 * # Safety
 * `result` must be null or point to a result filled by this library.
 */
void qb_witt_result_clear(struct QbWittResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QBOOLE_H */
