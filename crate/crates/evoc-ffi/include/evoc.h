#ifndef EVOC_H
#define EVOC_H

/* Generated by cbindgen from the evoc-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum EvocStatus {
  EVOC_OK = 0,
  /**
   * A required pointer argument was null.
   */
  EVOC_NULL_POINTER = 1,
  /**
   * Input text was not valid UTF-8.
   */
  EVOC_INVALID_UTF8 = 2,
  /**
   * Config rejected (parse error, unknown key, or out-of-range field).
   */
  EVOC_INVALID_CONFIG = 3,
  /**
   * Argument outside its documented range.
   */
  EVOC_INVALID_ARGUMENT = 4,
} EvocStatus;

/**
 * Opaque validated configuration handle.
 */
typedef struct EvocConfig EvocConfig;

/**
 * Opaque simulation handle: one world plus its PRNG stream.
 */
typedef struct EvocSim EvocSim;

/**
 * Per-iteration observables, mirrored as a plain C struct.
 */
typedef struct EvocMetrics {
  uint64_t iteration;
  double mean_fitness;
  double max_fitness;
  uint64_t diversity;
  double mean_p_invent;
  double frac_p_low;
  double frac_p_high;
} EvocMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a config with the documented defaults. Never fails.
 */
struct EvocConfig *evoc_config_default(void);

/**
 * Parse and validate a JSON config document.
 *
 * On success `*out` receives a new handle the caller must free with
 * `evoc_config_free`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum EvocStatus evoc_config_from_json(const char *json, struct EvocConfig **out);

/**
 * # Safety
 * `config` must come from this library and not be freed twice.
 */
void evoc_config_free(struct EvocConfig *config);

/**
 * Build a simulation from a config and seed. The config handle stays
 * owned by the caller.
 *
 * # Safety
 * `config` and `out` must be valid pointers.
 */
enum EvocStatus evoc_sim_new(const struct EvocConfig *config, uint64_t seed, struct EvocSim **out);

/**
 * Advance the world by one synchronous iteration; optionally reports the
 * post-step metrics when `metrics_out` is non-null.
 *
 * # Safety
 * `sim` must be a valid handle.
 */
enum EvocStatus evoc_sim_step(struct EvocSim *sim, struct EvocMetrics *metrics_out);

/**
 * Metrics of the current world state without advancing it.
 *
 * # Safety
 * `sim` and `metrics_out` must be valid pointers.
 */
enum EvocStatus evoc_sim_metrics(const struct EvocSim *sim, struct EvocMetrics *metrics_out);

/**
 * # Safety
 * `sim` must come from this library and not be freed twice.
 */
void evoc_sim_free(struct EvocSim *sim);

/**
 * Run a full simulation and return the timeseries CSV (same bytes as the
 * CLI `run` subcommand writes). Free the string with `evoc_string_free`.
 *
 * # Safety
 * `config` and `out` must be valid pointers.
 */
enum EvocStatus evoc_run_timeseries_csv(const struct EvocConfig *config, uint64_t seed, char **out);

/**
 * # Safety
 * `s` must come from `evoc_run_timeseries_csv` and not be freed twice.
 */
void evoc_string_free(char *s);

/**
 * Exact global optimum of the single-step reference landscape.
 *
 * # Safety
 * `max_out` and `count_out` must be valid pointers.
 */
enum EvocStatus evoc_oracle_ref6x3(double *max_out, uint64_t *count_out);

/**
 * Exact maximum of the chained landscape for `steps` steps.
 *
 * # Safety
 * `max_out` must be a valid pointer.
 */
enum EvocStatus evoc_oracle_chain(uint64_t steps, double beta, double *max_out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* EVOC_H */
