#ifndef LATENT_FFI_H
#define LATENT_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum LatentStatus {
  LATENT_STATUS_OK = 0,
  LATENT_STATUS_NULL_POINTER = 1,
  LATENT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed network document or rational literal.
   */
  LATENT_STATUS_PARSE = 3,
  /**
   * Bad site index, pair, size or parameter.
   */
  LATENT_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The operation does not apply (e.g. singlets of a non-cospectral pair).
   */
  LATENT_STATUS_PRECONDITION = 5,
  /**
   * Eigensolver failure or loss of unitarity.
   */
  LATENT_STATUS_NUMERICAL = 6,
  /**
   * Output buffer too small; the error message names the required length.
   */
  LATENT_STATUS_BUFFER_TOO_SMALL = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  LATENT_STATUS_INTERNAL = 8,
} LatentStatus;

/**
 * Opaque diagonalisation of a network's coupling matrix.
 */
typedef struct LatentEigenSystem LatentEigenSystem;

/**
 * Opaque network handle.
 */
typedef struct LatentNetwork LatentNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *latent_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void latent_string_free(char *s);

/**
 * Parses a JSON network document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LatentStatus latent_network_parse(const char *json, struct LatentNetwork **out);

/**
 * # Safety
 * `net` must come from [`latent_network_parse`] and not have been freed. Null is ignored.
 */
void latent_network_free(struct LatentNetwork *net);

/**
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum LatentStatus latent_network_size(const struct LatentNetwork *net, size_t *out);

/**
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum LatentStatus latent_is_cospectral(const struct LatentNetwork *net,
                                       size_t u,
                                       size_t v,
                                       bool *out);

/**
 * Cospectral and not related by a swap automorphism.
 *
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum LatentStatus latent_is_latent_symmetric(const struct LatentNetwork *net,
                                             size_t u,
                                             size_t v,
                                             bool *out);

/**
 * Writes the ascending singlet sites into `buf` and their count into `len`.
 * If `cap` is too small, only `len` is written and `BufferTooSmall` is returned.
 *
 * # Safety
 * `buf` must hold `cap` elements (may be null when `cap` is 0); `len` must be writable.
 */
enum LatentStatus latent_singlet_sites(const struct LatentNetwork *net,
                                       size_t u,
                                       size_t v,
                                       size_t *buf,
                                       size_t cap,
                                       size_t *len);

/**
 * Transfer certificate as a JSON document; free with [`latent_string_free`].
 *
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum LatentStatus latent_certificate_json(const struct LatentNetwork *net,
                                          size_t u,
                                          size_t v,
                                          char **out);

/**
 * Diagonalises the network's coupling matrix.
 *
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum LatentStatus latent_eigensystem_new(const struct LatentNetwork *net,
                                         struct LatentEigenSystem **out);

/**
 * # Safety
 * `sys` must come from [`latent_eigensystem_new`] and not have been freed. Null is ignored.
 */
void latent_eigensystem_free(struct LatentEigenSystem *sys);

/**
 * Transfer fidelity |U(tau)_{vu}|^2.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum LatentStatus latent_fidelity(const struct LatentEigenSystem *sys,
                                  size_t u,
                                  size_t v,
                                  double tau,
                                  double *out);

/**
 * Best fidelity peak on [0, tau_max] sampled at `step`.
 *
 * # Safety
 * `sys` must be a live handle; `tau_out` and `f_out` must be writable.
 */
enum LatentStatus latent_envelope_best(const struct LatentEigenSystem *sys,
                                       size_t u,
                                       size_t v,
                                       double tau_max,
                                       double step,
                                       double *tau_out,
                                       double *f_out);

/**
 * Two-photon correlation matrix after evolving for `tau`, interfering sites
 * `u` and `v` on a balanced beam splitter with `phase` on `v`.
 * Writes n*n row-major values into `buf`.
 *
 * # Safety
 * `sys` must be a live handle; `buf` must hold `cap` doubles.
 */
enum LatentStatus latent_correlation_matrix(const struct LatentEigenSystem *sys,
                                            size_t u,
                                            size_t v,
                                            double tau,
                                            double phase,
                                            bool distinguishable,
                                            bool halved,
                                            double *buf,
                                            size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATENT_FFI_H */
