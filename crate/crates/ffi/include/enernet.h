#ifndef ENERNET_H
#define ENERNET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EnernetStatus {
  ENERNET_STATUS_OK = 0,
  ENERNET_STATUS_NULL_POINTER = 1,
  ENERNET_STATUS_INVALID_ARGUMENT = 2,
  ENERNET_STATUS_NUMERICAL = 3,
  ENERNET_STATUS_IO = 4,
  ENERNET_STATUS_BUFFER_TOO_SMALL = 5,
  ENERNET_STATUS_PANIC = 6,
} EnernetStatus;

typedef enum EnernetSection {
  ENERNET_SECTION_NODE_HUB = 0,
  ENERNET_SECTION_NODE_AUTHORITY = 1,
  ENERNET_SECTION_LAYER_BROADCAST = 2,
  ENERNET_SECTION_LAYER_RECEIVE = 3,
  ENERNET_SECTION_TIME = 4,
} EnernetSection;

/**
 * Arc criticality report.
 */
typedef struct EnernetCriticality EnernetCriticality;

/**
 * MD-HITS result.
 */
typedef struct EnernetMdHits EnernetMdHits;

/**
 * Temporal multilayer network.
 */
typedef struct EnernetNetwork EnernetNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *enernet_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *enernet_version(void);

/**
 * Builds a network from arc lists. Arc `a` runs from supra index
 * `tails[a]` to `heads[a]` in period `periods[a]` (0-based, into `years`).
 *
 * # Safety
 * Array arguments must be valid for the stated lengths; `out` must be
 * writable.
 */
enum EnernetStatus enernet_network_from_arcs(size_t n_nodes,
                                             size_t n_layers,
                                             const int32_t *years,
                                             size_t n_periods,
                                             const size_t *periods,
                                             const size_t *tails,
                                             const size_t *heads,
                                             const double *weights,
                                             size_t n_arcs,
                                             struct EnernetNetwork **out);

/**
 * Loads `network_<source>.csv` written by the `build` command from `dir`.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` must be writable.
 */
enum EnernetStatus enernet_network_load(const char *dir,
                                        const char *source,
                                        struct EnernetNetwork **out);

/**
 * Generates the synthetic dataset described by the TOML file at
 * `spec_path` and builds its embodied-flow network for `source`.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` must be writable.
 */
enum EnernetStatus enernet_network_from_synthetic(const char *spec_path,
                                                  const char *source,
                                                  struct EnernetNetwork **out);

/**
 * # Safety
 * `net` must be null or a handle from this library, not yet freed.
 */
void enernet_network_free(struct EnernetNetwork *net);

/**
 * # Safety
 * `net` must be a live handle; output pointers may be null.
 */
enum EnernetStatus enernet_network_shape(const struct EnernetNetwork *net,
                                         size_t *n_nodes,
                                         size_t *n_layers,
                                         size_t *n_periods,
                                         size_t *n_arcs);

/**
 * Copies the period years into `buf` (length `len`).
 *
 * # Safety
 * `net` must be a live handle and `buf` valid for `len` writes.
 */
enum EnernetStatus enernet_network_years(const struct EnernetNetwork *net,
                                         int32_t *buf,
                                         size_t len);

/**
 * Runs MD-HITS. `gamma` may be null for the uniform default, otherwise it
 * points to five exponents.
 *
 * # Safety
 * `net` must be a live handle, `gamma` null or valid for 5 reads, `out`
 * writable.
 */
enum EnernetStatus enernet_mdhits(const struct EnernetNetwork *net,
                                  const double *gamma,
                                  double tol,
                                  size_t max_iter,
                                  struct EnernetMdHits **out);

/**
 * Length of one score section; `section` is an [`EnernetSection`] value.
 *
 * # Safety
 * `scores` must be a live handle and `len` writable.
 */
enum EnernetStatus enernet_mdhits_section_len(const struct EnernetMdHits *scores,
                                              uint32_t section,
                                              size_t *len);

/**
 * Copies one score section into `buf` (length `len`).
 *
 * # Safety
 * `scores` must be a live handle and `buf` valid for `len` writes.
 */
enum EnernetStatus enernet_mdhits_section(const struct EnernetMdHits *scores,
                                          uint32_t section,
                                          double *buf,
                                          size_t len);

/**
 * # Safety
 * `scores` must be a live handle.
 */
size_t enernet_mdhits_iterations(const struct EnernetMdHits *scores);

/**
 * # Safety
 * `scores` must be null or a handle from this library, not yet freed.
 */
void enernet_mdhits_free(struct EnernetMdHits *scores);

/**
 * HITS on a dense row-major `n x n` nonnegative matrix. `hub` and
 * `authority` receive `n` values each.
 *
 * # Safety
 * `weights` must be valid for `n * n` reads, `hub` and `authority` for `n`
 * writes; `iterations` may be null.
 */
enum EnernetStatus enernet_hits_dense(size_t n,
                                      const double *weights,
                                      double tol,
                                      size_t max_iter,
                                      double *hub,
                                      double *authority,
                                      size_t *iterations);

/**
 * Maximum flow from `source` to `target` over arcs `tails[a] -> heads[a]`
 * with capacities `capacities[a]`.
 *
 * # Safety
 * Arrays must be valid for `n_arcs` reads and `value` writable.
 */
enum EnernetStatus enernet_max_flow(size_t n_nodes,
                                    const size_t *tails,
                                    const size_t *heads,
                                    const double *capacities,
                                    size_t n_arcs,
                                    size_t source,
                                    size_t target,
                                    double *value);

/**
 * Country-level arc criticality of one period. With `sampled_pairs == 0`
 * every ordered pair is used; otherwise `sampled_pairs` pairs are drawn
 * from `seed`.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum EnernetStatus enernet_country_criticality(const struct EnernetNetwork *net,
                                               size_t period,
                                               size_t sampled_pairs,
                                               uint64_t seed,
                                               struct EnernetCriticality **out);

/**
 * # Safety
 * `report` must be a live handle; output pointers may be null.
 */
enum EnernetStatus enernet_criticality_summary(const struct EnernetCriticality *report,
                                               double *baseline_total,
                                               size_t *n_rows);

/**
 * Row `i` of the report (rows are sorted by index, descending). Output
 * pointers may be null.
 *
 * # Safety
 * `report` must be a live handle.
 */
enum EnernetStatus enernet_criticality_row(const struct EnernetCriticality *report,
                                           size_t i,
                                           size_t *tail,
                                           size_t *head,
                                           double *removed_total,
                                           double *index);

/**
 * # Safety
 * `report` must be null or a handle from this library, not yet freed.
 */
void enernet_criticality_free(struct EnernetCriticality *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENERNET_H */
