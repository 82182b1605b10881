#ifndef SCDR_H
#define SCDR_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum ScdrStatus {
  SCDR_STATUS_OK = 0,
  SCDR_STATUS_NULL_POINTER = 1,
  SCDR_STATUS_INVALID_UTF8 = 2,
  SCDR_STATUS_PARSE_ERROR = 3,
  SCDR_STATUS_NON_HOMOGENEOUS = 4,
  SCDR_STATUS_VERIFICATION_FAILED = 5,
  SCDR_STATUS_INVALID_ARGUMENT = 6,
  SCDR_STATUS_PANIC = 7,
} ScdrStatus;

/**
 * Opaque session: dimension, cutoff, memo tables and the last error.
 */
typedef struct ScdrSession ScdrSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session with `dim` coordinates and jet cutoff `cutoff`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum ScdrStatus scdr_session_new(uint32_t dim, uint32_t cutoff, struct ScdrSession **out);

/**
 * Releases a session. Null is ignored.
 *
 * # Safety
 * `session` must come from [`scdr_session_new`] and not be used afterwards.
 */
void scdr_session_free(struct ScdrSession *session);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void scdr_string_free(char *s);

/**
 * Message for the last failed call on `session`, or null. Owned by the session.
 *
 * # Safety
 * `session` must be a live handle or null.
 */
const char *scdr_last_error(const struct ScdrSession *session);

/**
 * Renders the Λ-bracket of two expressions into `*out`.
 *
 * # Safety
 * `session` must be a live handle; `a`, `b` nul-terminated strings; `out` writable.
 */
enum ScdrStatus scdr_bracket(struct ScdrSession *session, const char *a, const char *b, char **out);

/**
 * Renders the normal form of an expression into `*out`.
 *
 * # Safety
 * `session` must be a live handle; `expr` a nul-terminated string; `out` writable.
 */
enum ScdrStatus scdr_normalize(struct ScdrSession *session, const char *expr, char **out);

/**
 * Runs a verification suite, e.g. `"ns"` or `"n4 --flat-quaternionic"`,
 * with the session's dimension and cutoff. Writes the JSON reports to `*out`
 * and returns `VerificationFailed` when a check fails.
 *
 * # Safety
 * `session` must be a live handle; `args` a nul-terminated string; `out` writable.
 */
enum ScdrStatus scdr_verify(struct ScdrSession *session, const char *args, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCDR_H */
