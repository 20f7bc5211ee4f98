#ifndef DDOS_SIM_H
#define DDOS_SIM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DdosStatus {
  DDOS_STATUS_OK = 0,
  DDOS_STATUS_NULL_POINTER = 1,
  DDOS_STATUS_INVALID_UTF8 = 2,
  DDOS_STATUS_CONFIG = 3,
  DDOS_STATUS_RUNTIME = 4,
  DDOS_STATUS_STATS = 5,
  DDOS_STATUS_NOT_FOUND = 6,
  DDOS_STATUS_PANIC = 7,
} DdosStatus;

/**
 * Opaque result of a batch.
 */
typedef struct DdosBatch DdosBatch;

/**
 * Opaque scenario configuration.
 */
typedef struct DdosConfig DdosConfig;

/**
 * Opaque result of one run.
 */
typedef struct DdosRun DdosRun;

/**
 * Run metrics; optional values carry a `has_` flag.
 */
typedef struct DdosMetrics {
  uint64_t correctly_identified_attackers;
  uint64_t filtered_legal_clients;
  uint64_t dropped_packets;
  uint64_t max_buffer_level;
  uint64_t max_buffer_slot;
  bool has_restore_time;
  uint64_t restore_time_after_tstar;
  bool has_detection_time;
  int64_t detection_time_after_tstar;
} DdosMetrics;

typedef struct DdosMetricSummary {
  size_t count;
  double min;
  double mean;
  double max;
  double ci95_halfwidth;
} DdosMetricSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library from the same thread.
 */
const char *ddos_last_error(void);

/**
 * Creates a config from a preset name (`sim1` or `sim2`).
 *
 * # Safety
 * `name` must be a valid C string and `out` a valid pointer.
 */
enum DdosStatus ddos_config_preset(const char *name, struct DdosConfig **out);

/**
 * Parses a config from `key = value` text.
 *
 * # Safety
 * `text` must be a valid C string and `out` a valid pointer.
 */
enum DdosStatus ddos_config_parse(const char *text, struct DdosConfig **out);

/**
 * Sets one key, using the same names and syntax as config files.
 *
 * # Safety
 * `cfg` must come from this library; `key` and `value` must be C strings.
 */
enum DdosStatus ddos_config_set(struct DdosConfig *cfg, const char *key, const char *value);

/**
 * Serializes the config as `key = value` text. Free with [`ddos_string_free`].
 *
 * # Safety
 * `cfg` must come from this library and `out` be a valid pointer.
 */
enum DdosStatus ddos_config_to_string(const struct DdosConfig *cfg, char **out);

/**
 * # Safety
 * `cfg` must come from this library (or be null) and not be used again.
 */
void ddos_config_free(struct DdosConfig *cfg);

/**
 * # Safety
 * `s` must come from this library (or be null) and not be used again.
 */
void ddos_string_free(char *s);

/**
 * Runs one simulation.
 *
 * # Safety
 * `cfg` must come from this library and `out` be a valid pointer.
 */
enum DdosStatus ddos_run(const struct DdosConfig *cfg, struct DdosRun **out);

/**
 * # Safety
 * `run` must come from this library and `out` be a valid pointer.
 */
enum DdosStatus ddos_run_metrics(const struct DdosRun *run, struct DdosMetrics *out);

/**
 * Event log, one tab-separated event per line. Free with [`ddos_string_free`].
 *
 * # Safety
 * `run` must come from this library and `out` be a valid pointer.
 */
enum DdosStatus ddos_run_log(const struct DdosRun *run, char **out);

/**
 * # Safety
 * `run` must come from this library (or be null) and not be used again.
 */
void ddos_run_free(struct DdosRun *run);

/**
 * Runs seeds `base_seed .. base_seed + n_runs`.
 *
 * # Safety
 * `cfg` must come from this library and `out` be a valid pointer.
 */
enum DdosStatus ddos_batch(const struct DdosConfig *cfg,
                           size_t n_runs,
                           uint64_t base_seed,
                           struct DdosBatch **out);

/**
 * # Safety
 * `batch` must come from this library (or be null).
 */
size_t ddos_batch_len(const struct DdosBatch *batch);

/**
 * Metrics of run `index` in seed order.
 *
 * # Safety
 * `batch` must come from this library and `out` be a valid pointer.
 */
enum DdosStatus ddos_batch_metrics(const struct DdosBatch *batch,
                                   size_t index,
                                   struct DdosMetrics *out);

/**
 * Summary of one metric, named as in the CSV header. `NotFound` when the
 * name is unknown or no run produced a value.
 *
 * # Safety
 * `batch` must come from this library, `name` be a C string and `out` valid.
 */
enum DdosStatus ddos_batch_summary(const struct DdosBatch *batch,
                                   const char *name,
                                   struct DdosMetricSummary *out);

/**
 * # Safety
 * `batch` must come from this library (or be null) and not be used again.
 */
void ddos_batch_free(struct DdosBatch *batch);

/**
 * # Safety
 * `values` must point to `n` doubles and `out` be a valid pointer.
 */
enum DdosStatus ddos_sample_mean(const double *values, size_t n, double *out);

/**
 * # Safety
 * `values` must point to `n` doubles and `out` be a valid pointer.
 */
enum DdosStatus ddos_sample_std(const double *values, size_t n, double *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum DdosStatus ddos_normal_quantile(double p, double *out);

/**
 * Pooled two-sample t-test; writes the statistic and the decision.
 *
 * # Safety
 * `a`/`b` must point to `na`/`nb` doubles; `t` and `reject` must be valid.
 */
enum DdosStatus ddos_pooled_t(const double *a,
                              size_t na,
                              const double *b,
                              size_t nb,
                              double alpha,
                              double *t,
                              bool *reject);

/**
 * Mean-centered Levene test; writes W and the decision.
 *
 * # Safety
 * `a`/`b` must point to `na`/`nb` doubles; `w` and `reject` must be valid.
 */
enum DdosStatus ddos_levene(const double *a,
                            size_t na,
                            const double *b,
                            size_t nb,
                            double alpha,
                            double *w,
                            bool *reject);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DDOS_SIM_H */
