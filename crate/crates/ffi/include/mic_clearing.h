#ifndef MIC_CLEARING_H
#define MIC_CLEARING_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MicFormat {
  MIC_FORMAT_HUMAN = 0,
  MIC_FORMAT_CSV = 1,
  MIC_FORMAT_JSON = 2,
} MicFormat;

typedef enum MicObjective {
  /**
   * Hourly welfare only.
   */
  MIC_OBJECTIVE_HOURLY = 0,
  /**
   * Welfare net of MIC fixed and variable terms.
   */
  MIC_OBJECTIVE_MIC_COST = 1,
} MicObjective;

typedef enum MicStatus {
  MIC_STATUS_OK = 0,
  MIC_STATUS_NULL_POINTER = 1,
  MIC_STATUS_INVALID_UTF8 = 2,
  MIC_STATUS_PARSE_ERROR = 3,
  MIC_STATUS_VALIDATION_ERROR = 4,
  MIC_STATUS_SOLVER_ERROR = 5,
  MIC_STATUS_INFEASIBLE = 6,
  MIC_STATUS_OUT_OF_RANGE = 7,
  MIC_STATUS_UNKNOWN_ID = 8,
  MIC_STATUS_INVALID_NUMBER = 9,
  MIC_STATUS_PANIC = 10,
} MicStatus;

/**
 * A validated bid set.
 */
typedef struct MicInstance MicInstance;

/**
 * An optimal clearing together with the bid set it belongs to.
 */
typedef struct MicResult MicResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *mic_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void mic_string_free(char *s);

/**
 * Parses and validates a bid-set JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum MicStatus mic_instance_from_json(const char *json, struct MicInstance **out);

/**
 * Serializes an instance back to a bid-set document.
 *
 * # Safety
 * `instance` must be a live handle; `out` must be writable.
 */
enum MicStatus mic_instance_to_json(const struct MicInstance *instance, char **out);

/**
 * # Safety
 * `instance` must come from [`mic_instance_from_json`] and not have been
 * freed. Null is ignored.
 */
void mic_instance_free(struct MicInstance *instance);

/**
 * Clears `instance` under `objective`.
 *
 * # Safety
 * `instance` must be a live handle; `out` must be writable.
 */
enum MicStatus mic_clear(const struct MicInstance *instance,
                         enum MicObjective objective,
                         struct MicResult **out);

/**
 * # Safety
 * `result` must come from [`mic_clear`] and not have been freed. Null is
 * ignored.
 */
void mic_result_free(struct MicResult *result);

/**
 * # Safety
 * `result` must be a live handle; `out` must be writable.
 */
enum MicStatus mic_result_period_count(const struct MicResult *result, size_t *out);

/**
 * Objective value as a fraction string.
 *
 * # Safety
 * `result` must be a live handle; `out` must be writable.
 */
enum MicStatus mic_result_objective_value(const struct MicResult *result, char **out);

/**
 * Clearing price of `period` (1-based) as a fraction string.
 *
 * # Safety
 * `result` must be a live handle; `out` must be writable.
 */
enum MicStatus mic_result_mcp(const struct MicResult *result, size_t period, char **out);

/**
 * Accepted fraction of bid `bid_id` as a fraction string.
 *
 * # Safety
 * `result` must be a live handle, `bid_id` a NUL-terminated string and
 * `out` writable.
 */
enum MicStatus mic_result_acceptance(const struct MicResult *result,
                                     const char *bid_id,
                                     char **out);

/**
 * Whether MIC order `order_id` is active.
 *
 * # Safety
 * `result` must be a live handle, `order_id` a NUL-terminated string and
 * `out` writable.
 */
enum MicStatus mic_result_is_active(const struct MicResult *result,
                                    const char *order_id,
                                    bool *out);

/**
 * Renders the result the way the `clear` command prints it.
 *
 * # Safety
 * `result` must be a live handle; `out` must be writable.
 */
enum MicStatus mic_result_render(const struct MicResult *result, enum MicFormat format, char **out);

/**
 * Sweeps the submitted fixed term of `order_id` over `[from, to]` (fraction
 * or decimal strings) and renders the window report.
 *
 * # Safety
 * `instance` must be a live handle, the strings NUL-terminated and `out`
 * writable.
 */
enum MicStatus mic_sweep_fixed_term(const struct MicInstance *instance,
                                    const char *order_id,
                                    const char *from,
                                    const char *to,
                                    enum MicObjective objective,
                                    enum MicFormat format,
                                    char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIC_CLEARING_H */
