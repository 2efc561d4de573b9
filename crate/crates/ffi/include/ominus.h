#ifndef OMINUS_H
#define OMINUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum OminusStatus {
  OMINUS_STATUS_OK = 0,
  OMINUS_STATUS_NULL_POINTER = 1,
  OMINUS_STATUS_INVALID_ARGUMENT = 2,
  /*
   Parameters outside the range where a formula holds.
   */
  OMINUS_STATUS_DOMAIN = 3,
  /*
   The computation would exceed a size budget.
   */
  OMINUS_STATUS_BUDGET = 4,
  /*
   Two computations that must agree did not.
   */
  OMINUS_STATUS_INCONSISTENT = 5,
  OMINUS_STATUS_PARSE = 6,
  /*
   A bug: the library panicked.
   */
  OMINUS_STATUS_INTERNAL = 7,
} OminusStatus;

/*
 A finite field GF(2^r) with its modulus and quadratic-form parameter.
 */
typedef struct OminusField OminusField;

/*
 A double-coset family member `DC_i^{+-}(n, q)`.
 */
typedef struct OminusSpec OminusSpec;

/*
 Library version, a static string.
 */
const char *ominus_version(void);

/*
 Description of the last failure on this thread; empty after a success.
 Valid until the next library call on the same thread.
 */
const char *ominus_last_error_message(void);

/*
 Releases a string returned by the library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void ominus_string_free(char *s);

/*
 Creates GF(2^r). `modulus = 0` selects the default irreducible modulus.

 # Safety
 `out` must be valid for writing a pointer.
 */
enum OminusStatus ominus_field_new(uint32_t r, uint32_t modulus, struct OminusField **out);

/*
 Replaces the quadratic-form parameter (must have trace one).

 # Safety
 `field` must be a live handle.
 */
enum OminusStatus ominus_field_set_a_param(struct OminusField *field, uint32_t a);

/*
 # Safety
 `field` must be null or a handle from [`ominus_field_new`] not yet freed.
 */
void ominus_field_free(struct OminusField *field);

/*
 Writes `q`, the modulus bitmask and `a_param`; any out-pointer may be null.

 # Safety
 `field` must be a live handle; non-null outputs must be writable.
 */
enum OminusStatus ominus_field_info(const struct OminusField *field,
                                    uint32_t *q,
                                    uint32_t *modulus,
                                    uint32_t *a_param);

/*
 `K_m(lambda; a)` by direct summation, `a != 0`.

 # Safety
 `field` must be a live handle and `out` writable.
 */
enum OminusStatus ominus_kloosterman(const struct OminusField *field,
                                     uint32_t m,
                                     uint32_t a,
                                     int64_t *out);

/*
 `DC_family^sign(n, q)` over `field`; `sign` is `+1` or `-1`. The spec
 keeps its own copy of the field.

 # Safety
 `field` must be a live handle and `out` writable.
 */
enum OminusStatus ominus_spec_new(const struct OminusField *field,
                                  uint8_t family,
                                  int32_t sign,
                                  uint32_t n,
                                  struct OminusSpec **out);

/*
 # Safety
 `spec` must be null or a handle from [`ominus_spec_new`] not yet freed.
 */
void ominus_spec_free(struct OminusSpec *spec);

/*
 `|DC|` as a decimal string.

 # Safety
 `spec` must be a live handle and `out` writable.
 */
enum OminusStatus ominus_spec_size(const struct OminusSpec *spec, char **out);

/*
 Closed-form trace counts as a JSON object keyed by hex element.

 # Safety
 `spec` must be a live handle and `out` writable.
 */
enum OminusStatus ominus_trace_distribution_json(const struct OminusSpec *spec, char **out);

/*
 `C_0..C_{j_max}` of the spec's code as a JSON document.

 # Safety
 `spec` must be a live handle and `out` writable.
 */
enum OminusStatus ominus_weight_prefix_json(const struct OminusSpec *spec,
                                            uint32_t j_max,
                                            char **out);

/*
 The recursion report for `h = 1..=h_max` as a JSON document.

 # Safety
 `spec` must be a live handle and `out` writable.
 */
enum OminusStatus ominus_recursive_moments_json(const struct OminusSpec *spec,
                                                uint32_t h_max,
                                                char **out);

/*
 Runs every verification suite for `r <= max_r`; `passed` receives 1 or 0.

 # Safety
 `out` and `passed` must be writable.
 */
enum OminusStatus ominus_verify_all_json(uint32_t max_r, int32_t *passed, char **out);

/*
 Parses a hex element or modulus such as `"0x13"`.

 # Safety
 `text` must be a NUL-terminated string and `out` writable.
 */
enum OminusStatus ominus_parse_hex(const char *text, uint32_t *out);

#endif  /* OMINUS_H */
