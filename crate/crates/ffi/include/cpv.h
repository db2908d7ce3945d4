#ifndef CPV_H
#define CPV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum CpvStatus {
  CPV_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CPV_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  CPV_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or scalar text.
   */
  CPV_STATUS_PARSE = 3,
  CPV_STATUS_IO = 4,
  /**
   * Well-formed input the library rejects, such as an invalid module.
   */
  CPV_STATUS_DOMAIN = 5,
  /**
   * The input exceeds an enumeration bound.
   */
  CPV_STATUS_TOO_LARGE = 6,
  /**
   * The library panicked; this is a bug.
   */
  CPV_STATUS_PANIC = 7,
} CpvStatus;

/**
 * Opaque barcode handle.
 */
typedef struct CpvBarcode CpvBarcode;

/**
 * Opaque sampled-module handle.
 */
typedef struct CpvModule CpvModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *cpv_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string obtained from this library, not yet freed.
 */
void cpv_string_free(char *s);

/**
 * Parses a barcode document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CpvStatus cpv_barcode_from_json(const char *json, struct CpvBarcode **out);

/**
 * Serializes a barcode to JSON.
 *
 * # Safety
 * `b` must be a live handle and `out` a writable pointer.
 */
enum CpvStatus cpv_barcode_to_json(const struct CpvBarcode *b, char **out);

/**
 * Number of bars in `b`.
 *
 * # Safety
 * `b` must be a live handle and `out` a writable pointer.
 */
enum CpvStatus cpv_barcode_len(const struct CpvBarcode *b, size_t *out);

/**
 * Releases a barcode handle. Null is ignored.
 *
 * # Safety
 * `b` must be null or a handle from this library, not yet freed.
 */
void cpv_barcode_free(struct CpvBarcode *b);

/**
 * Parses and validates a module document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CpvStatus cpv_module_from_json(const char *json, struct CpvModule **out);

/**
 * Serializes a module to JSON.
 *
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum CpvStatus cpv_module_to_json(const struct CpvModule *m, char **out);

/**
 * Releases a module handle. Null is ignored.
 *
 * # Safety
 * `m` must be null or a handle from this library, not yet freed.
 */
void cpv_module_free(struct CpvModule *m);

/**
 * Barcode of the ellipsoid with `n` factors, truncated at `horizon`.
 *
 * # Safety
 * `factors` must point to `n` NUL-terminated strings, `horizon` must be a
 * NUL-terminated string and `out` a writable pointer.
 */
enum CpvStatus cpv_ellipsoid_barcode(const char *const *factors,
                                     size_t n,
                                     const char *horizon,
                                     struct CpvBarcode **out);

/**
 * Interval decomposition of a module.
 *
 * # Safety
 * `m` must be a live handle and `out` a writable pointer.
 */
enum CpvStatus cpv_decompose(const struct CpvModule *m, struct CpvBarcode **out);

/**
 * Canonical module realizing `b`, sampled `density` times per gap.
 *
 * # Safety
 * `b` must be a live handle and `out` a writable pointer.
 */
enum CpvStatus cpv_module_from_barcode(const struct CpvBarcode *b,
                                       size_t density,
                                       struct CpvModule **out);

/**
 * Bottleneck distance, written as a scalar string.
 *
 * # Safety
 * `b1` and `b2` must be live handles and `out` a writable pointer.
 */
enum CpvStatus cpv_bottleneck(const struct CpvBarcode *b1,
                              const struct CpvBarcode *b2,
                              bool graded,
                              char **out);

/**
 * Interleaving distance by exhaustive search, written as a scalar string.
 *
 * # Safety
 * `m1` and `m2` must be live handles and `out` a writable pointer.
 */
enum CpvStatus cpv_interleaving(const struct CpvModule *m1,
                                const struct CpvModule *m2,
                                bool graded,
                                char **out);

/**
 * Spectral invariant of SH class `index`, written as a scalar string.
 *
 * # Safety
 * `b` must be a live handle and `out` a writable pointer.
 */
enum CpvStatus cpv_spectral_invariant(const struct CpvBarcode *b, size_t index, char **out);

/**
 * Boundary depth, written as a rational string.
 *
 * # Safety
 * `b` must be a live handle and `out` a writable pointer.
 */
enum CpvStatus cpv_boundary_depth(const struct CpvBarcode *b, char **out);

/**
 * Covering number of the endpoints of bars of length at least `delta`.
 *
 * # Safety
 * `b` must be a live handle, `delta` a NUL-terminated string and `out` a
 * writable pointer.
 */
enum CpvStatus cpv_covering_number(const struct CpvBarcode *b, const char *delta, size_t *out);

/**
 * Lower bound on the number of translated-point lengths at scale `delta`.
 *
 * # Safety
 * `b` must be a live handle, `delta` a NUL-terminated string and `out` a
 * writable pointer.
 */
enum CpvStatus cpv_translated_point_bound(const struct CpvBarcode *b,
                                          const char *delta,
                                          size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPV_H */
