/* C interface of the sullivan computer-algebra engine. */

#ifndef SULLIVAN_FFI_H
#define SULLIVAN_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum SvStatus {
  /**
   * The call succeeded.
   */
  SV_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SV_STATUS_NULL_ARGUMENT = 1,
  /**
   * The input text was not valid UTF-8.
   */
  SV_STATUS_INVALID_UTF8 = 2,
  /**
   * The model text failed to parse or validate.
   */
  SV_STATUS_PARSE = 3,
  /**
   * The model is not elliptic, so the pipeline refuses it.
   */
  SV_STATUS_NOT_ELLIPTIC = 4,
  /**
   * A pipeline stage failed.
   */
  SV_STATUS_PIPELINE = 5,
} SvStatus;

/**
 * An opaque validated model handle.
 */
typedef struct SvModel SvModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent failure on this thread, or null if no
 * call has failed yet. The pointer stays valid until the next failing
 * call on the same thread; do not free it.
 */
const char *sv_last_error(void);

/**
 * Parses and validates a model written in the `.sm` language.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out_model` to a
 * writable pointer slot.
 */
enum SvStatus sv_model_parse(const char *text, struct SvModel **out_model);

/**
 * Releases a model handle. Null is ignored.
 *
 * # Safety
 * `model` must be a pointer from `sv_model_parse` not yet freed, or null.
 */
void sv_model_free(struct SvModel *model);

/**
 * Writes the formal dimension of the model to `out`.
 *
 * # Safety
 * `model` must be a live handle and `out` a writable slot.
 */
enum SvStatus sv_formal_dimension(const struct SvModel *model, int64_t *out);

/**
 * Writes the exact ellipticity verdict to `out`.
 *
 * # Safety
 * `model` must be a live handle and `out` a writable slot.
 */
enum SvStatus sv_is_elliptic(const struct SvModel *model, bool *out);

/**
 * Runs the full pipeline and writes the invariant report as a JSON string
 * to `out_json`. With `include_trace`, each stage carries its per-step
 * records. The string is owned by the caller; release it with
 * `sv_string_free`.
 *
 * # Safety
 * `model` must be a live handle and `out_json` a writable pointer slot.
 */
enum SvStatus sv_invariants_json(const struct SvModel *model, bool include_trace, char **out_json);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be a string pointer returned by this library not yet freed,
 * or null.
 */
void sv_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SULLIVAN_FFI_H */
