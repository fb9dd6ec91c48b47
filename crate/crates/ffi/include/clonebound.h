#ifndef CLONEBOUND_H
#define CLONEBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum {
  CB_STATUS_OK = 0,
  CB_STATUS_NULL_POINTER = 1,
  /**
   * Bad dimension, size or scalar argument.
   */
  CB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Matrix is not a valid density operator.
   */
  CB_STATUS_INVALID_STATE = 3,
  /**
   * The two states have root fidelity 1.
   */
  CB_STATUS_DEGENERATE_PAIR = 4,
  CB_STATUS_TARGET_OUT_OF_RANGE = 5,
  CB_STATUS_NUMERICAL_FAILURE = 6,
  /**
   * A panic was caught; the library state is unaffected.
   */
  CB_STATUS_INTERNAL = 7,
} cb_status;

/**
 * Opaque density-matrix handle.
 */
typedef struct cb_density cb_density;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *cb_last_error(void);

/**
 * Builds a density matrix from `dim * dim` row-major real and imaginary parts.
 *
 * # Safety
 * `re` and `im` must point to `dim * dim` readable doubles; `out` must be writable.
 */
cb_status cb_density_new(size_t dim, const double *re, const double *im, cb_density **out);

/**
 * Random density matrix of the given rank, deterministic in `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
cb_status cb_density_random(size_t dim, size_t rank, uint64_t seed, cb_density **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `rho` must be null or a handle from this library not yet freed.
 */
void cb_density_free(cb_density *rho);

/**
 * Dimension of the state, 0 for a null handle.
 *
 * # Safety
 * `rho` must be null or a live handle.
 */
size_t cb_density_dim(const cb_density *rho);

/**
 * Copies the row-major entries into `re` and `im`, each of length `len = dim * dim`.
 *
 * # Safety
 * `rho` must be a live handle; `re` and `im` must point to `len` writable doubles.
 */
cb_status cb_density_entries(const cb_density *rho, double *re, double *im, size_t len);

/**
 * Fidelity `F = (Tr|√a √b|)²`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
cb_status cb_fidelity(const cb_density *a, const cb_density *b, double *out);

/**
 * Angle `arccos √F`, in `[0, π/2]`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
cb_status cb_angle(const cb_density *a, const cb_density *b, double *out);

/**
 * Lower bound on the relative error of an `n → l` cloner for input root
 * fidelity `f` and ancilla root fidelity `phi`.
 *
 * # Safety
 * `out` must be writable.
 */
cb_status cb_lower_bound(double f, double phi, size_t n, size_t l, double *out);

/**
 * Randomized inequality check in dimension `d` (2 to 6). Writes the number of
 * violations and the largest `lhs − rhs` seen.
 *
 * # Safety
 * `violations` and `max_slack` must be writable.
 */
cb_status cb_verify_inequalities(size_t d,
                                 uint64_t trials,
                                 uint64_t seed,
                                 uint64_t *violations,
                                 double *max_slack);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLONEBOUND_H */
