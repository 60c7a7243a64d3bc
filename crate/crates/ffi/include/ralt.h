#ifndef RALT_H
#define RALT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RaltStatus {
  RALT_STATUS_OK = 0,
  RALT_STATUS_NULL_POINTER = 1,
  RALT_STATUS_INVALID_UTF8 = 2,
  RALT_STATUS_CONFIG = 3,
  RALT_STATUS_IO = 4,
  RALT_STATUS_INPUT = 5,
  /**
   * The simulation already reached its horizon.
   */
  RALT_STATUS_FINISHED = 6,
  /**
   * No interval has been simulated yet.
   */
  RALT_STATUS_NO_DATA = 7,
  RALT_STATUS_PANIC = 8,
} RaltStatus;

/**
 * Opaque simulation handle.
 */
typedef struct RaltSim RaltSim;

/**
 * One interval's network metrics.
 */
typedef struct RaltIntervalMetrics {
  double t;
  double mean_ddod;
  double max_ddod;
  double mean_latency_s;
  double p95_latency_s;
  uint64_t reroutes;
  uint64_t handovers;
  uint64_t sleeps;
  uint64_t shutdowns_cum;
  uint64_t drops;
} RaltIntervalMetrics;

/**
 * Whole-run aggregates. Policy and level are available via the JSON summary.
 */
typedef struct RaltSummary {
  uint64_t seed;
  uint64_t intervals;
  uint64_t satellites;
  uint64_t flows;
  double mean_ddod;
  double max_ddod;
  double latency_mean_s;
  double latency_p95_s;
  uint64_t total_shutdowns;
  uint64_t total_reroutes;
  uint64_t total_sleeps;
  uint64_t total_drops;
  double final_mean_dod;
} RaltSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ralt_version(void);

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ralt_last_error(void);

/**
 * Builds a simulation from scenario TOML (missing keys take defaults).
 * `overrides` may be null or an array of `n_overrides` `key=value` strings.
 *
 * # Safety
 * `toml` must be a NUL-terminated string; `overrides`, when non-null, must
 * point to `n_overrides` such strings; `out` must be writable.
 */
enum RaltStatus ralt_sim_new(const char *toml,
                             const char *const *overrides,
                             size_t n_overrides,
                             struct RaltSim **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sim` must come from [`ralt_sim_new`] and not have been freed.
 */
void ralt_sim_free(struct RaltSim *sim);

/**
 * Advances one interval; `RALT_STATUS_FINISHED` once the horizon is reached.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum RaltStatus ralt_sim_step(struct RaltSim *sim);

/**
 * Runs every remaining interval.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum RaltStatus ralt_sim_run(struct RaltSim *sim);

/**
 * Intervals simulated so far and the total for the horizon.
 *
 * # Safety
 * `sim` must be a live handle; either output may be null.
 */
enum RaltStatus ralt_sim_progress(const struct RaltSim *sim, size_t *done, size_t *total);

/**
 * Metrics of the most recent interval.
 *
 * # Safety
 * `sim` must be a live handle and `out` writable.
 */
enum RaltStatus ralt_sim_last_metrics(const struct RaltSim *sim, struct RaltIntervalMetrics *out);

/**
 * Aggregates over the intervals simulated so far.
 *
 * # Safety
 * `sim` must be a live handle and `out` writable.
 */
enum RaltStatus ralt_sim_summary(const struct RaltSim *sim, struct RaltSummary *out);

/**
 * Full summary as a JSON string; release it with [`ralt_string_free`].
 *
 * # Safety
 * `sim` must be a live handle and `out` writable.
 */
enum RaltStatus ralt_sim_summary_json(const struct RaltSim *sim, char **out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ralt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RALT_H */
