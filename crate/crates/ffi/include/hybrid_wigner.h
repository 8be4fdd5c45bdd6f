#ifndef HYBRID_WIGNER_H
#define HYBRID_WIGNER_H

#include <stddef.h>
#include <stdint.h>

// Result codes.
typedef enum HwStatus {
  HW_STATUS_OK = 0,
  HW_STATUS_INVALID_ARGUMENT = 1,
  HW_STATUS_NON_RESONANT = 2,
  HW_STATUS_CUTOFF_TOO_SMALL = 3,
  HW_STATUS_NULL_POINTER = 4,
  HW_STATUS_UNSUPPORTED = 5,
  HW_STATUS_NUMERICAL = 6,
  HW_STATUS_PANIC = 7,
} HwStatus;

// Opaque model handle.
typedef struct HwModel HwModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a model for the initial state `|e⟩ ⊗ |α⟩`. `cutoff = 0` selects
// `N = ceil(|α|² + 8|α| + 12)`.
//
// # Safety
// `out` must be valid for writes.
enum HwStatus hw_model_new(double omega,
                           double big_omega,
                           double g,
                           double alpha_re,
                           double alpha_im,
                           size_t cutoff,
                           struct HwModel **out);

// Create a model for the initial state `|e, r⟩`. `cutoff = 0` selects `N = r + 1`.
//
// # Safety
// `out` must be valid for writes.
enum HwStatus hw_model_new_fock(double omega,
                                double big_omega,
                                double g,
                                size_t r,
                                size_t cutoff,
                                struct HwModel **out);

// Release a model. Null is ignored.
//
// # Safety
// `model` must come from a constructor here and not be used afterwards.
void hw_model_free(struct HwModel *model);

// Fock cutoff `N` in use.
//
// # Safety
// Pointers must be valid.
enum HwStatus hw_model_cutoff(const struct HwModel *model, size_t *out);

// `P_e`, `P_g` and `Z` at time `t`.
//
// # Safety
// Pointers must be valid.
enum HwStatus hw_inversion(const struct HwModel *model,
                           double t,
                           double *out_pe,
                           double *out_pg,
                           double *out_z);

// Full hybrid Wigner function at `(θ, φ, β)` and time `t`.
//
// # Safety
// Pointers must be valid.
enum HwStatus hw_wigner_full(const struct HwModel *model,
                             double t,
                             double theta,
                             double phi,
                             double beta_re,
                             double beta_im,
                             double *out);

// Reduced field Wigner function at `β`.
//
// # Safety
// Pointers must be valid.
enum HwStatus hw_wigner_field(const struct HwModel *model,
                              double t,
                              double beta_re,
                              double beta_im,
                              double *out);

// Reduced qubit Wigner function at `(θ, φ)`.
//
// # Safety
// Pointers must be valid.
enum HwStatus hw_wigner_qubit(const struct HwModel *model,
                              double t,
                              double theta,
                              double phi,
                              double *out);

// Field purity `π ∫ W_f² d²β` at time `t`. Coherent models only.
//
// # Safety
// Pointers must be valid.
enum HwStatus hw_purity(const struct HwModel *model, double t, double *out);

// Long-time purity `1/2 + (1/2) e^{-2|α|²} I₀(2|α|²)`.
//
// # Safety
// `out` must be valid for writes.
enum HwStatus hw_purity_asymptote(double alpha_re, double alpha_im, double *out);

// `k`-th revival time `2πk|α|/g`. Coherent models with `α ≠ 0` only.
//
// # Safety
// Pointers must be valid.
enum HwStatus hw_revival_time(const struct HwModel *model, uint32_t k, double *out);

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *hw_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYBRID_WIGNER_H */
