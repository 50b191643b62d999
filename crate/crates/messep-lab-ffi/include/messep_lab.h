#ifndef MESSEP_LAB_H
#define MESSEP_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum MessepStatus {
  MESSEP_STATUS_OK = 0,
  MESSEP_STATUS_INVALID_ARGUMENT = 1,
  MESSEP_STATUS_RESOURCE_CAP = 2,
  MESSEP_STATUS_NUMERICAL_FAILURE = 3,
  MESSEP_STATUS_CHECK_FAILED = 4,
  MESSEP_STATUS_NULL_POINTER = 5,
  MESSEP_STATUS_BUFFER_TOO_SMALL = 6,
  MESSEP_STATUS_INTERNAL = 7,
} MessepStatus;

/**
 * Characteristic flow of a hydrodynamic initial profile.
 */
typedef struct MessepFlow MessepFlow;

/**
 * Transition kernel and spectrum of one `(L, N)`.
 */
typedef struct MessepKernel MessepKernel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *messep_last_error(void);

/**
 * `1 - λ₂` for `(L, N)`.
 *
 * # Safety
 * `out` must be a valid pointer to one `double`.
 */
enum MessepStatus messep_spectral_gap(uintptr_t ring, uintptr_t particles, double *out);

/**
 * Builds the kernel of `(L, N)`; `*out` receives a handle.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MessepStatus messep_kernel_new(uintptr_t ring, uintptr_t particles, struct MessepKernel **out);

/**
 * # Safety
 * `kernel` must come from [`messep_kernel_new`] and not be used afterwards.
 */
void messep_kernel_free(struct MessepKernel *kernel);

/**
 * Number of configurations `C(L, N)`.
 *
 * # Safety
 * `kernel` must be a live handle and `out` a valid pointer.
 */
enum MessepStatus messep_kernel_state_count(const struct MessepKernel *kernel, uintptr_t *out);

/**
 * Eigenvalues `ρ_ξ/ρ_c` in configuration order, written to `buf[0..len)`.
 *
 * # Safety
 * `kernel` must be a live handle and `buf` must hold `len` doubles.
 */
enum MessepStatus messep_kernel_eigenvalues(const struct MessepKernel *kernel,
                                            double *buf,
                                            uintptr_t len);

/**
 * `Σ_k (-1)^k χ^{{n|k}}_π (n-2k-1)^j` for `π = parts[0..len)`.
 *
 * # Safety
 * `parts` must hold `len` entries and `out` must be valid.
 */
enum MessepStatus messep_hook_char_sum(const uintptr_t *parts,
                                       uintptr_t len,
                                       uintptr_t j,
                                       int64_t *out);

/**
 * Flow of the step profile of filling `α`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MessepStatus messep_flow_new_step(double alpha, struct MessepFlow **out);

/**
 * Flow of the profile with moments `m_k = re[k-1] + i im[k-1]`, `k = 1..=len`.
 *
 * # Safety
 * `re` and `im` must each hold `len` doubles; `out` must be valid.
 */
enum MessepStatus messep_flow_new_moments(double alpha,
                                          const double *re,
                                          const double *im,
                                          uintptr_t len,
                                          struct MessepFlow **out);

/**
 * # Safety
 * `flow` must come from a `messep_flow_new_*` call and not be used afterwards.
 */
void messep_flow_free(struct MessepFlow *flow);

/**
 * The root `w` of `Φ_t(w) = z` in the disk `|w| <= |z|`.
 *
 * # Safety
 * `flow` must be a live handle; `w_re` and `w_im` must be valid.
 */
enum MessepStatus messep_flow_invert(const struct MessepFlow *flow,
                                     double t,
                                     double z_re,
                                     double z_im,
                                     double *w_re,
                                     double *w_im);

/**
 * Density `f(t, 2πj/m)` for `j < m`, written to `buf[0..m)`.
 *
 * # Safety
 * `flow` must be a live handle and `buf` must hold `m` doubles.
 */
enum MessepStatus messep_density(const struct MessepFlow *flow, double t, uintptr_t m, double *buf);

/**
 * Limiting moments `𝔪_1(t), ..., 𝔪_{n_max}(t)` as real and imaginary parts.
 *
 * # Safety
 * `flow` must be a live handle; `re` and `im` must each hold `n_max` doubles.
 */
enum MessepStatus messep_limit_moments(const struct MessepFlow *flow,
                                       double t,
                                       uintptr_t n_max,
                                       double *re,
                                       double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MESSEP_LAB_H */
