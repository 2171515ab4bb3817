#ifndef ARBOR_H
#define ARBOR_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ArborStatus {
  ARBOR_STATUS_OK = 0,
  ARBOR_STATUS_NULL_POINTER = 1,
  ARBOR_STATUS_INVALID_ARGUMENT = 2,
  ARBOR_STATUS_PARSE_ERROR = 3,
  ARBOR_STATUS_COMPUTATION_ERROR = 4,
  ARBOR_STATUS_GUARD_EXCEEDED = 5,
  ARBOR_STATUS_UNKNOWN_REFERENCE = 6,
  ARBOR_STATUS_BUFFER_TOO_SMALL = 7,
  ARBOR_STATUS_OUT_OF_RANGE = 8,
  ARBOR_STATUS_PANIC = 9,
} ArborStatus;

/**
 * Exact level-n interval.
 */
typedef struct ArborInterval ArborInterval;

/**
 * Scan configuration handle.
 */
typedef struct ArborScanConfig ArborScanConfig;

/**
 * Result of a prime scan.
 */
typedef struct ArborScanReport ArborScanReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread.
 */
enum ArborStatus arbor_last_error(char *buf, uintptr_t len, uintptr_t *needed);

/**
 * Closed-form density as an exact rational string ("11/21") plus a double.
 */
enum ArborStatus arbor_closed_form_density(const char *family,
                                           uint64_t ell,
                                           char *buf,
                                           uintptr_t len,
                                           uintptr_t *needed,
                                           double *decimal);

enum ArborStatus arbor_density_level(const char *spec,
                                     uint64_t ell,
                                     uint32_t n,
                                     struct ArborInterval **out);

enum ArborStatus arbor_interval_bounds(const struct ArborInterval *iv,
                                       double *lower,
                                       double *upper);

/**
 * Writes "lower upper" as exact rationals.
 */
enum ArborStatus arbor_interval_exact(const struct ArborInterval *iv,
                                      char *buf,
                                      uintptr_t len,
                                      uintptr_t *needed);

void arbor_interval_free(struct ArborInterval *iv);

enum ArborStatus arbor_density_mc(const char *spec,
                                  uint64_t ell,
                                  uint32_t n,
                                  uint64_t samples,
                                  uint64_t seed,
                                  double *mean,
                                  double *half_width);

enum ArborStatus arbor_scan_config_example(const char *name, struct ArborScanConfig **out);

/**
 * Parses the `key = value` config format.
 */
enum ArborStatus arbor_scan_config_parse(const char *text, struct ArborScanConfig **out);

enum ArborStatus arbor_scan_config_set_bounds(struct ArborScanConfig *cfg,
                                              const uint64_t *bounds,
                                              uintptr_t count);

void arbor_scan_config_free(struct ArborScanConfig *cfg);

enum ArborStatus arbor_scan_run(const struct ArborScanConfig *cfg, struct ArborScanReport **out);

enum ArborStatus arbor_scan_report_len(const struct ArborScanReport *rep, uintptr_t *len);

enum ArborStatus arbor_scan_report_row(const struct ArborScanReport *rep,
                                       uintptr_t index,
                                       uint64_t *x,
                                       uint64_t *good,
                                       uint64_t *total);

/**
 * Number of cells that differ from the stored table `reference`.
 */
enum ArborStatus arbor_scan_report_compare(const struct ArborScanReport *rep,
                                           const char *reference,
                                           uintptr_t *mismatches);

/**
 * The report as JSON.
 */
enum ArborStatus arbor_scan_report_json(const struct ArborScanReport *rep,
                                        char *buf,
                                        uintptr_t len,
                                        uintptr_t *needed);

void arbor_scan_report_free(struct ArborScanReport *rep);

/**
 * `*result`: 1 if p divides some Somos-4 term, 0 if none, -1 if undetermined.
 * `*index` receives the first such index when `*result` is 1.
 */
enum ArborStatus arbor_somos_divides(uint64_t p, int32_t *result, uint64_t *index);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARBOR_H */
