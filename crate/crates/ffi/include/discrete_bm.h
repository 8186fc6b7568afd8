#ifndef DISCRETE_BM_H
#define DISCRETE_BM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of an FFI call.
 */
typedef enum DbmStatus {
  DBM_STATUS_OK = 0,
  DBM_STATUS_NULL_ARGUMENT = 1,
  DBM_STATUS_INVALID_UTF8 = 2,
  DBM_STATUS_INVALID_INPUT = 3,
  DBM_STATUS_PRECONDITION = 4,
  DBM_STATUS_HYPOTHESIS_FAILED = 5,
  DBM_STATUS_PANIC = 6,
} DbmStatus;

/**
 * Outcome recorded in a certificate.
 */
typedef enum DbmVerdict {
  DBM_VERDICT_HOLDS_STRICT = 0,
  DBM_VERDICT_HOLDS_EQUAL = 1,
  DBM_VERDICT_VIOLATED = 2,
} DbmVerdict;

/**
 * The outcome of one verification.
 */
typedef struct DbmCertificate DbmCertificate;

/**
 * A finite union of boxes or a finite point set.
 */
typedef struct DbmSet DbmSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *dbm_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dbm_version(void);

/**
 * Parses a set from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum DbmStatus dbm_set_from_json(const char *json, struct DbmSet **out);

/**
 * Ambient dimension of `set`, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle from [`dbm_set_from_json`].
 */
size_t dbm_set_dim(const struct DbmSet *set);

/**
 * Number of integer points in `set`, as a decimal string.
 *
 * # Safety
 * `set` must be a live handle and `out` a writable pointer.
 */
enum DbmStatus dbm_set_lattice_count(const struct DbmSet *set, char **out);

/**
 * Releases a set. Null is ignored.
 *
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void dbm_set_free(struct DbmSet *set);

/**
 * Checks the set inequality named by `theorem` for `K`, `L` at weight `lambda`.
 *
 * `lambda` is a rational such as `"1/3"`. `p` is the mean exponent for
 * `bm_pmean` (`"0"`, `"-1/2"`, `"inf"`, ...); pass null for `inf`.
 *
 * # Safety
 * String arguments must be NUL-terminated, set handles live, `out` writable.
 */
enum DbmStatus dbm_verify(const char *theorem,
                          const struct DbmSet *k,
                          const struct DbmSet *l,
                          const char *lambda,
                          const char *p,
                          struct DbmCertificate **out);

/**
 * The rational-dilation inequality with weights `m/q`, `p/q`.
 *
 * # Safety
 * As for [`dbm_verify`].
 */
enum DbmStatus dbm_verify_dilation(const struct DbmSet *k,
                                   const struct DbmSet *l,
                                   uint32_t m,
                                   uint32_t p,
                                   uint32_t q,
                                   struct DbmCertificate **out);

/**
 * Verdict of `cert`. A null handle reads as `Violated`.
 *
 * # Safety
 * `cert` must be null or a live certificate handle.
 */
enum DbmVerdict dbm_certificate_verdict(const struct DbmCertificate *cert);

/**
 * The full certificate as JSON.
 *
 * # Safety
 * `cert` must be a live handle and `out` a writable pointer.
 */
enum DbmStatus dbm_certificate_to_json(const struct DbmCertificate *cert, char **out);

/**
 * Releases a certificate. Null is ignored.
 *
 * # Safety
 * `cert` must be null or a handle not yet freed.
 */
void dbm_certificate_free(struct DbmCertificate *cert);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void dbm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISCRETE_BM_H */
