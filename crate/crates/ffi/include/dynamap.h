/*
 * C interface to dynamap.
 *
 * Matrices cross the boundary as row-major arrays of interleaved doubles:
 * entry (i, j) of an N x N matrix occupies [2(iN + j)] (real) and
 * [2(iN + j) + 1] (imaginary), 2N^2 doubles in total. Linear maps are given
 * by the N^2 images of the basis elements, concatenated in basis order.
 *
 * Every fallible call returns a DynamapStatus. On failure a message is
 * available from dynamap_last_error_message() on the same thread.
 */

#ifndef DYNAMAP_H
#define DYNAMAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum DynamapStatus {
  DYNAMAP_STATUS_OK = 0,
  DYNAMAP_STATUS_NULL_POINTER = 1,
  DYNAMAP_STATUS_INVALID_ARGUMENT = 2,
  DYNAMAP_STATUS_DIMENSION_MISMATCH = 3,
  DYNAMAP_STATUS_NOT_HERMITIAN = 4,
  DYNAMAP_STATUS_CONVERGENCE_FAILURE = 5,
  DYNAMAP_STATUS_NON_HERMITIAN_CHOI = 6,
  DYNAMAP_STATUS_PARSE_ERROR = 7,
  DYNAMAP_STATUS_PANIC = 8,
} DynamapStatus;

typedef struct DynamapAffineMap DynamapAffineMap;

// Hermitian operator basis of one dimension.
typedef struct DynamapBasis DynamapBasis;

typedef struct DynamapLinearMap DynamapLinearMap;

// Joint system-environment scenario together with its initial-state assignment.
typedef struct DynamapScenario DynamapScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or NULL after a
// successful call. Valid until the next call into this library on the same thread.
const char *dynamap_last_error_message(void);

// Static name of a status code.
const char *dynamap_status_name(enum DynamapStatus status);

// Releases a string returned by this library. NULL is ignored.
void dynamap_string_free(char *s);

enum DynamapStatus dynamap_basis_new(size_t dim, struct DynamapBasis **out);

void dynamap_basis_free(struct DynamapBasis *basis);

enum DynamapStatus dynamap_basis_dim(const struct DynamapBasis *basis, size_t *out);

// Largest deviation of the Gram matrix `Tr[F_mu F_nu]` from `N delta`.
enum DynamapStatus dynamap_basis_gram_residual(const struct DynamapBasis *basis, double *out);

// Copies element `mu` (0 is the identity) into `out` (2N^2 doubles).
enum DynamapStatus dynamap_basis_element(const struct DynamapBasis *basis,
                                         size_t mu,
                                         double *out,
                                         size_t out_len);

// Expansion coefficients `c_mu = Tr[F_mu Q]/N` of `q`, written as N^2
// interleaved complex numbers.
enum DynamapStatus dynamap_basis_expand(const struct DynamapBasis *basis,
                                        const double *q,
                                        size_t q_len,
                                        double *out,
                                        size_t out_len);

// Parses and validates a scenario document (UTF-8 JSON).
enum DynamapStatus dynamap_scenario_from_json(const char *json, struct DynamapScenario **out);

// The bundled correlated two-qubit demo; `zero_correlations` drops the correlation terms.
enum DynamapStatus dynamap_scenario_demo(bool zero_correlations, struct DynamapScenario **out);

void dynamap_scenario_free(struct DynamapScenario *scenario);

enum DynamapStatus dynamap_scenario_system_dim(const struct DynamapScenario *scenario, size_t *out);

enum DynamapStatus dynamap_scenario_env_dim(const struct DynamapScenario *scenario, size_t *out);

// Serializes the scenario; release the string with `dynamap_string_free`.
enum DynamapStatus dynamap_scenario_to_json(const struct DynamapScenario *scenario, char **out);

// Completely positive linear part at time `t` (unital, independent of the assignment).
enum DynamapStatus dynamap_cp_linear_part(const struct DynamapScenario *scenario,
                                          double t,
                                          struct DynamapLinearMap **out);

// Linear map induced on the system by the assignment and evolution to time `t`.
enum DynamapStatus dynamap_full_linear_map(const struct DynamapScenario *scenario,
                                           double t,
                                           struct DynamapLinearMap **out);

// Affine form `Q -> L(Q) + Tr[Q] K` of the reduced dynamics with `L` completely positive.
enum DynamapStatus dynamap_affine_decomposition(const struct DynamapScenario *scenario,
                                                double t,
                                                struct DynamapAffineMap **out);

// Builds a linear map from the N^2 basis images (N^2 * 2N^2 doubles).
enum DynamapStatus dynamap_linear_map_new(size_t dim,
                                          const double *images,
                                          size_t images_len,
                                          struct DynamapLinearMap **out);

void dynamap_linear_map_free(struct DynamapLinearMap *map);

enum DynamapStatus dynamap_linear_map_dim(const struct DynamapLinearMap *map, size_t *out);

// Copies the image of basis element `mu` into `out` (2N^2 doubles).
enum DynamapStatus dynamap_linear_map_image(const struct DynamapLinearMap *map,
                                            size_t mu,
                                            double *out,
                                            size_t out_len);

enum DynamapStatus dynamap_linear_map_apply(const struct DynamapLinearMap *map,
                                            const double *q,
                                            size_t q_len,
                                            double *out,
                                            size_t out_len);

// Least eigenvalue of the (unnormalized) Choi matrix.
enum DynamapStatus dynamap_linear_map_min_choi_eigenvalue(const struct DynamapLinearMap *map,
                                                          double *out);

// Complete-positivity verdict: Choi eigenvalues all at least `-tol_psd`.
enum DynamapStatus dynamap_linear_map_is_cp(const struct DynamapLinearMap *map, bool *out);

// Largest trace defect of the map over the basis.
enum DynamapStatus dynamap_linear_map_trace_residual(const struct DynamapLinearMap *map,
                                                     double *out);

// Canonical affine form with unital linear part.
enum DynamapStatus dynamap_linear_to_affine(const struct DynamapLinearMap *map,
                                            struct DynamapAffineMap **out);

// Serializes the map as `{dim, kind, images}`; release with `dynamap_string_free`.
enum DynamapStatus dynamap_linear_map_to_json(const struct DynamapLinearMap *map, char **out);

// Builds `Q -> L(Q) + Tr[Q] K` from the images of `L` and the Hermitian offset `K`.
enum DynamapStatus dynamap_affine_map_new(size_t dim,
                                          const double *images,
                                          size_t images_len,
                                          const double *offset,
                                          size_t offset_len,
                                          struct DynamapAffineMap **out);

void dynamap_affine_map_free(struct DynamapAffineMap *map);

enum DynamapStatus dynamap_affine_map_dim(const struct DynamapAffineMap *map, size_t *out);

enum DynamapStatus dynamap_affine_map_apply(const struct DynamapAffineMap *map,
                                            const double *q,
                                            size_t q_len,
                                            double *out,
                                            size_t out_len);

// Copies the offset `K` into `out` (2N^2 doubles).
enum DynamapStatus dynamap_affine_map_offset(const struct DynamapAffineMap *map,
                                             double *out,
                                             size_t out_len);

// The linear part as a new map handle.
enum DynamapStatus dynamap_affine_map_linear_part(const struct DynamapAffineMap *map,
                                                  struct DynamapLinearMap **out);

// Offset coefficients `d_alpha = Tr[F_alpha K]` for alpha = 1..N^2-1 (N^2 - 1 doubles).
enum DynamapStatus dynamap_affine_map_d_parameters(const struct DynamapAffineMap *map,
                                                   double *out,
                                                   size_t out_len);

// Linear map agreeing with the affine map on all unit-trace inputs.
enum DynamapStatus dynamap_affine_to_linear(const struct DynamapAffineMap *map,
                                            struct DynamapLinearMap **out);

// Serializes the map as `{dim, kind, images, offset}`; release with `dynamap_string_free`.
enum DynamapStatus dynamap_affine_map_to_json(const struct DynamapAffineMap *map, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYNAMAP_H */
