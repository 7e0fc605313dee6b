#ifndef AFSTERM_H
#define AFSTERM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum AfstermStatus {
  /**
   * Success: YES, ACCEPT, or a normal form was reached.
   */
  AFSTERM_STATUS_OK = 0,
  /**
   * The search gave up without a certificate.
   */
  AFSTERM_STATUS_MAYBE = 1,
  /**
   * The certificate was rejected.
   */
  AFSTERM_STATUS_REJECTED = 2,
  /**
   * Normalization ran out of fuel.
   */
  AFSTERM_STATUS_FUEL_EXHAUSTED = 3,
  /**
   * Malformed system, term, option or unsupported input.
   */
  AFSTERM_STATUS_INVALID_INPUT = 4,
  AFSTERM_STATUS_NULL_POINTER = 5,
  AFSTERM_STATUS_INVALID_UTF8 = 6,
  /**
   * An internal error; the message says more.
   */
  AFSTERM_STATUS_INTERNAL = 7,
} AfstermStatus;

/**
 * A parsed and well-formed rewrite system.
 */
typedef struct AfstermSystem AfstermSystem;

/**
 * Options for [`afsterm_check`]; obtain defaults from
 * [`afsterm_check_options_default`].
 */
typedef struct AfstermCheckOptions {
  uint8_t degree;
  uint32_t max_coeff;
  /**
   * Wall-clock limit in milliseconds.
   */
  uint64_t timeout_ms;
  /**
   * Worker threads; 0 means one per available core.
   */
  size_t jobs;
  /**
   * Allow function arguments in the polynomial templates.
   */
  bool fun_args;
} AfstermCheckOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a system in the `.afs` text format. On success `*out` receives a
 * handle to be released with [`afsterm_system_free`].
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AfstermStatus afsterm_system_parse(const char *text, struct AfstermSystem **out);

/**
 * Releases a system. Null is ignored.
 *
 * # Safety
 * `system` must come from [`afsterm_system_parse`] and not be used afterwards.
 */
void afsterm_system_free(struct AfstermSystem *system);

/**
 * Number of rules, or 0 for a null handle.
 *
 * # Safety
 * `system` must be null or a live handle.
 */
size_t afsterm_system_rule_count(const struct AfstermSystem *system);

/**
 * Number of function symbols, or 0 for a null handle.
 *
 * # Safety
 * `system` must be null or a live handle.
 */
size_t afsterm_system_symbol_count(const struct AfstermSystem *system);

struct AfstermCheckOptions afsterm_check_options_default(void);

/**
 * Searches for a termination certificate. Returns `Ok` and stores the
 * certificate text in `*cert_out` (if non-null), or `Maybe` when none was
 * found; the reason is then available from [`afsterm_last_error`].
 * `options` may be null for the defaults.
 *
 * # Safety
 * `system` must be a live handle; `options` and `cert_out` must be null or valid.
 */
enum AfstermStatus afsterm_check(const struct AfstermSystem *system,
                                 const struct AfstermCheckOptions *options,
                                 char **cert_out);

/**
 * Checks a certificate against the system: `Ok` to accept, `Rejected` with
 * the reason in [`afsterm_last_error`] otherwise.
 *
 * # Safety
 * `system` must be a live handle and `cert` a NUL-terminated string.
 */
enum AfstermStatus afsterm_verify(const struct AfstermSystem *system, const char *cert);

/**
 * Rewrites a closed term (concrete syntax) leftmost-outermost. Stores the
 * last term reached in `*term_out` and the number of steps in `*steps_out`
 * (each if non-null). Returns `FuelExhausted` if `fuel` steps were not
 * enough.
 *
 * # Safety
 * `system` must be a live handle, `term` a NUL-terminated string, and the
 * out-pointers null or valid.
 */
enum AfstermStatus afsterm_normalize(const struct AfstermSystem *system,
                                     const char *term,
                                     size_t fuel,
                                     char **term_out,
                                     size_t *steps_out);

/**
 * The message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *afsterm_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void afsterm_string_free(char *s);

/**
 * The library version as a static string.
 */
const char *afsterm_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* AFSTERM_H */
