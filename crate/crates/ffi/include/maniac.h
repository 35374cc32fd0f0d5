#ifndef MANIAC_H
#define MANIAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ManiacStatus {
  MANIAC_STATUS_OK = 0,
  MANIAC_STATUS_NULL_POINTER = 1,
  MANIAC_STATUS_INVALID_UTF8 = 2,
  MANIAC_STATUS_CONFIG = 3,
  MANIAC_STATUS_INVALID_NETWORK = 4,
  MANIAC_STATUS_RATE_REGION = 5,
  MANIAC_STATUS_DECODE_FAILURE = 6,
  MANIAC_STATUS_INTERNAL = 7,
  MANIAC_STATUS_PANIC = 8,
} ManiacStatus;

/**
 * Opaque experiment: network, codes, decoding mode and adversary.
 */
typedef struct ManiacExperiment ManiacExperiment;

/**
 * Opaque validated network.
 */
typedef struct ManiacNetwork ManiacNetwork;

typedef struct ManiacCuts {
  size_t c1;
  size_t c2;
  size_t c;
} ManiacCuts;

typedef struct ManiacTrial {
  bool success;
  /**
   * Rank of the error the adversary induced at the receiver.
   */
  size_t rank_e;
  bool d_invertible;
  double elapsed_ms;
} ManiacTrial;

typedef struct ManiacSummary {
  size_t trials;
  size_t successes;
  double success_rate;
  double bound;
  double margin;
  double d_invertible_rate;
} ManiacSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. The caller owns the string
 * and releases it with [`maniac_string_free`].
 */
char *maniac_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void maniac_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *maniac_version(void);

/**
 * The bundled 13-edge reference network over `F_p`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum ManiacStatus maniac_network_reference(uint64_t p, struct ManiacNetwork **out);

/**
 * Parses `{"nodes": [...], "edges": [[tail, head], ...], "p": int}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ManiacStatus maniac_network_from_json(const char *json, struct ManiacNetwork **out);

/**
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum ManiacStatus maniac_network_cuts(const struct ManiacNetwork *net, struct ManiacCuts *out);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t maniac_network_num_edges(const struct ManiacNetwork *net);

/**
 * # Safety
 * `net` must be null or a handle from this library, freed at most once.
 */
void maniac_network_free(struct ManiacNetwork *net);

/**
 * Builds an experiment from the same JSON accepted by `maniac --config`.
 * Network paths in the JSON are taken relative to the working directory.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ManiacStatus maniac_experiment_from_json(const char *json, struct ManiacExperiment **out);

/**
 * Runs one trial with exactly this seed. A counted decoding failure is
 * reported through `out->success`, not the status.
 *
 * # Safety
 * `exp` must be a live handle; `out` must be writable.
 */
enum ManiacStatus maniac_experiment_run_trial(const struct ManiacExperiment *exp,
                                              uint64_t seed,
                                              struct ManiacTrial *out);

/**
 * Runs `trials` trials with seeds derived from `base_seed`, on `jobs`
 * threads (0 = all cores).
 *
 * # Safety
 * `exp` must be a live handle; `out` must be writable.
 */
enum ManiacStatus maniac_experiment_campaign(const struct ManiacExperiment *exp,
                                             size_t trials,
                                             uint64_t base_seed,
                                             size_t jobs,
                                             struct ManiacSummary *out);

/**
 * # Safety
 * `exp` must be null or a handle from this library, freed at most once.
 */
void maniac_experiment_free(struct ManiacExperiment *exp);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MANIAC_H */
