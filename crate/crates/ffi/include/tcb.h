#ifndef TCB_H
#define TCB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum TcbStatus {
  TCB_STATUS_OK = 0,
  TCB_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input: space string, flavor, UTF-8, sizes.
   */
  TCB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Well-formed input the library cannot handle (planner or ring error).
   */
  TCB_STATUS_DOMAIN = 3,
  /**
   * A verification suite reported failures.
   */
  TCB_STATUS_VERIFICATION = 4,
  /**
   * Internal error; the library caught a panic.
   */
  TCB_STATUS_INTERNAL = 5,
} TcbStatus;

typedef enum TcbFlavor {
  TCB_FLAVOR_TC = 0,
  TCB_FLAVOR_BETA = 1,
  TCB_FLAVOR_SIGMA = 2,
} TcbFlavor;

/**
 * A planned path with its metadata.
 */
typedef struct TcbPath TcbPath;

/**
 * A graded mod-2 cohomology ring.
 */
typedef struct TcbRing TcbRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL.
 * The pointer stays valid until the next call on this thread.
 */
const char *tcb_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void tcb_string_free(char *s);

/**
 * Plans a path through `n_points` waypoints on S^`m`.
 *
 * `coords` holds `n_points * (m + 1)` doubles, point after point. Two points
 * use the pair planner; more points use the waypoint planner (odd `m` only).
 *
 * # Safety
 * `coords` must point to `n_points * (m + 1)` readable doubles.
 */
enum TcbStatus tcb_plan(const double *coords, size_t n_points, size_t m, struct TcbPath **out);

/**
 * Sphere dimension m of the path (points have m + 1 coordinates).
 *
 * # Safety
 * `path` must be a live handle or NULL.
 */
size_t tcb_path_dim(const struct TcbPath *path);

/**
 * Writes the point at time `t` in `[0, 1]` into `out[0..=m]`.
 *
 * # Safety
 * `path` must be a live handle; `out` must hold `out_len` doubles.
 */
enum TcbStatus tcb_path_evaluate(const struct TcbPath *path, double t, double *out, size_t out_len);

/**
 * The plan (segments, breakpoints, domain, rules, flags) as JSON.
 *
 * # Safety
 * `path` must be a live handle; free the result with `tcb_string_free`.
 */
enum TcbStatus tcb_path_to_json(const struct TcbPath *path, char **out);

/**
 * # Safety
 * `path` must come from `tcb_plan` and not be freed twice. NULL is ignored.
 */
void tcb_path_free(struct TcbPath *path);

/**
 * Cohomology ring of a space such as `RP(4)` or `Power(S(2),2)`.
 *
 * # Safety
 * `space` must be a NUL-terminated string.
 */
enum TcbStatus tcb_ring_from_space(const char *space, struct TcbRing **out);

/**
 * Cohomology of the symmetric square.
 *
 * # Safety
 * `ring` must be a live handle.
 */
enum TcbStatus tcb_ring_sp2(const struct TcbRing *ring, struct TcbRing **out);

/**
 * Number of basis elements; 0 for NULL.
 *
 * # Safety
 * `ring` must be a live handle or NULL.
 */
size_t tcb_ring_dim(const struct TcbRing *ring);

/**
 * # Safety
 * `ring` must be a live handle.
 */
enum TcbStatus tcb_ring_cup_length(const struct TcbRing *ring, size_t *out);

/**
 * Poincaré polynomial, e.g. `1 + t^2 + t^4`.
 *
 * # Safety
 * `ring` must be a live handle; free the result with `tcb_string_free`.
 */
enum TcbStatus tcb_ring_poincare(const struct TcbRing *ring, char **out);

/**
 * # Safety
 * `ring` must come from this library and not be freed twice. NULL is ignored.
 */
void tcb_ring_free(struct TcbRing *ring);

/**
 * Closed interval `[lower, upper]` for the given flavor.
 *
 * # Safety
 * `space` must be a NUL-terminated string; `lower` and `upper` writable.
 */
enum TcbStatus tcb_bounds(const char *space,
                          size_t n,
                          enum TcbFlavor flavor,
                          uint64_t *lower,
                          uint64_t *upper);

/**
 * The interval with its derivations as JSON.
 *
 * # Safety
 * `space` must be a NUL-terminated string; free the result with `tcb_string_free`.
 */
enum TcbStatus tcb_bounds_json(const char *space, size_t n, enum TcbFlavor flavor, char **out);

/**
 * Runs one verification suite and returns its report as JSON.
 * Returns `TCB_STATUS_VERIFICATION` (with the report still written) on failures.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; free the result with `tcb_string_free`.
 */
enum TcbStatus tcb_verify(const char *suite, size_t trials, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TCB_H */
