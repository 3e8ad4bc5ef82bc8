#ifndef KELLER_LAB_H
#define KELLER_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KlStatus {
  KL_STATUS_OK = 0,
  KL_STATUS_NULL_POINTER = 1,
  KL_STATUS_PARSE = 2,
  KL_STATUS_PRECONDITION = 3,
  KL_STATUS_DEGENERATE = 5,
  KL_STATUS_BUFFER_TOO_SMALL = 6,
  KL_STATUS_INVALID_UTF8 = 7,
  KL_STATUS_PANIC = 8,
} KlStatus;

typedef enum KlNorm {
  KL_NORM_EUCLIDEAN = 0,
  KL_NORM_SUP = 1,
} KlNorm;

/**
 * Opaque characteristic domain.
 */
typedef struct KlDomain KlDomain;

/**
 * Opaque polynomial map with exact Gaussian-rational coefficients.
 */
typedef struct KlMap KlMap;

typedef struct KlMetricEstimate {
  double value;
  double std_error;
  size_t samples;
  size_t discarded;
  uint64_t seed;
  double g1_side;
  double g2_side;
} KlMetricEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf`.
 *
 * # Safety
 * `buf` must be null or valid for `capacity` bytes; `needed` must be null
 * or writable.
 */
enum KlStatus kl_last_error_message(char *buf, size_t capacity, size_t *needed);

/**
 * Parses a map from the JSON map-definition format.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum KlStatus kl_map_from_json(const char *json, struct KlMap **out);

/**
 * Writes the canonical JSON of `map` into `buf`.
 *
 * # Safety
 * `map` must come from this library; `buf` must be null or valid for
 * `capacity` bytes; `needed` must be null or writable.
 */
enum KlStatus kl_map_to_json(const struct KlMap *map, char *buf, size_t capacity, size_t *needed);

/**
 * # Safety
 * `map` must be null or a handle from this library not yet freed.
 */
void kl_map_free(struct KlMap *map);

/**
 * `*out = f∘g`.
 *
 * # Safety
 * `f` and `g` must be valid handles and `out` writable.
 */
enum KlStatus kl_map_compose(const struct KlMap *f, const struct KlMap *g, struct KlMap **out);

/**
 * Sets `*passes` to whether `det J ≡ 1` and, when `strict`, both
 * components have Y-degree equal to their total degree.
 *
 * # Safety
 * `map` must be a valid handle and `passes` writable.
 */
enum KlStatus kl_map_keller_check(const struct KlMap *map, bool strict, bool *passes);

/**
 * Solves `F(x, y) = (a, b)` with `target = [a_re, a_im, b_re, b_im]`.
 * Points are written as consecutive `[x_re, x_im, y_re, y_im]` quadruples;
 * `*count` receives the fiber size even when `capacity` points do not fit.
 *
 * # Safety
 * `target` must hold 4 doubles, `points` must be null or hold
 * `4 * capacity` doubles, and `count` must be writable.
 */
enum KlStatus kl_fiber_solve(const struct KlMap *map,
                             const double *target,
                             double *points,
                             size_t capacity,
                             size_t *count);

/**
 * Largest fiber size over `targets` random targets.
 *
 * # Safety
 * `map` must be a valid handle and `degree` writable.
 */
enum KlStatus kl_geometric_degree(const struct KlMap *map,
                                  size_t targets,
                                  uint64_t seed,
                                  size_t *degree);

/**
 * Builds a characteristic domain.
 *
 * # Safety
 * `out` must be writable.
 */
enum KlStatus kl_domain_build(double radius,
                              size_t slices,
                              size_t stars,
                              enum KlNorm norm,
                              struct KlDomain **out);

/**
 * # Safety
 * `domain` must be null or a handle from this library not yet freed.
 */
void kl_domain_free(struct KlDomain *domain);

/**
 * Monte Carlo estimate of `ρ_D(g1, g2)`.
 *
 * # Safety
 * All handles must be valid and `out` writable.
 */
enum KlStatus kl_rho(const struct KlMap *g1,
                     const struct KlMap *g2,
                     const struct KlDomain *domain,
                     size_t samples,
                     uint64_t seed,
                     struct KlMetricEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KELLER_LAB_H */
