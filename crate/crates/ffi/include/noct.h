#ifndef NOCT_H
#define NOCT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero library codes match the command line exit codes.
 */
typedef enum NoctStatus {
  NOCT_STATUS_OK = 0,
  NOCT_STATUS_INTERNAL = 1,
  NOCT_STATUS_INPUT = 2,
  NOCT_STATUS_IO = 3,
  NOCT_STATUS_DOMAIN = 4,
  NOCT_STATUS_NULL_ARGUMENT = 5,
  NOCT_STATUS_PANIC = 6,
} NoctStatus;

/**
 * A loaded surface model with its declared points.
 */
typedef struct NoctModel NoctModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call on the same thread.
 */
const char *noct_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void noct_string_free(char *s);

/**
 * Loads a built-in model (`p2`, `hirzebruch:N`, `blp-p2`, `example5`).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NoctStatus noct_model_builtin(const char *name, struct NoctModel **out);

/**
 * Parses and validates a model file given as JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NoctStatus noct_model_from_json(const char *json, struct NoctModel **out);

/**
 * # Safety
 * `m` must come from this library and not be freed twice.
 */
void noct_model_free(struct NoctModel *m);

/**
 * Picard rank of the model, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t noct_model_rank(const struct NoctModel *m);

/**
 * `{"intersection": "p/q"}`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NoctStatus noct_intersection(const struct NoctModel *m,
                                  const char *a,
                                  const char *b,
                                  char **out);

/**
 * Zariski decomposition of a class.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NoctStatus noct_zariski(const struct NoctModel *m, const char *class_, char **out);

/**
 * Newton-Okounkov polygon for the flag curve `flag`; `incidence` may be null.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NoctStatus noct_polygon(const struct NoctModel *m,
                             const char *class_,
                             const char *flag,
                             const char *incidence,
                             char **out);

/**
 * Largest inverted simplex constant at a declared point; `point` may be null
 * for the model's only point.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NoctStatus noct_xi(const struct NoctModel *m,
                        const char *point,
                        const char *class_,
                        char **out);

/**
 * Extended Seshadri value with the asymptotic multiplicity.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NoctStatus noct_seshadri(const struct NoctModel *m,
                              const char *point,
                              const char *class_,
                              char **out);

/**
 * Exact Seshadri function on the segment from `from` to `to`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NoctStatus noct_seshadri_profile(const struct NoctModel *m,
                                      const char *point,
                                      const char *from,
                                      const char *to,
                                      char **out);

/**
 * Valuation vector of a germ in `n` variables, e.g. `"u1*u2 + u2^3"`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NoctStatus noct_valuate(size_t n, const char *germ_text, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOCT_H */
