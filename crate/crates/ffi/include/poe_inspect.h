#ifndef POE_INSPECT_H
#define POE_INSPECT_H

/* Generated by cbindgen from poe-inspect-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a C API call.
 */
typedef enum PoeStatus {
  POE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  POE_STATUS_NULL_ARGUMENT = 1,
  /**
   * The configuration text did not parse or validate.
   */
  POE_STATUS_INVALID_CONFIG = 2,
  /**
   * Arguments were structurally valid but rejected by the library.
   */
  POE_STATUS_INVALID_ARGUMENT = 3,
  /**
   * An internal panic was caught at the boundary.
   */
  POE_STATUS_PANIC = 4,
} PoeStatus;

/**
 * Opaque handle to a validated system model.
 */
typedef struct PoeModel PoeModel;

/**
 * Exact evaluation of one policy, mirroring the core `Evaluation`.
 */
typedef struct PoeEvaluation {
  /**
   * P(system accepts | container suspect).
   */
  double false_accept;
  /**
   * P(system rejects | container clean).
   */
  double false_reject;
  double misclassification_cost;
  double inspection_cost;
  /**
   * `misclassification_cost + inspection_cost`.
   */
  double total_cost;
  double total_time;
} PoeEvaluation;

/**
 * Monte Carlo estimates with their standard errors.
 */
typedef struct PoeSimulation {
  double false_accept;
  double false_accept_std_error;
  double false_reject;
  double false_reject_std_error;
  double mean_cost;
  double mean_cost_std_error;
  double mean_time;
  double mean_time_std_error;
  /**
   * Containers drawn in each of the three sampling passes.
   */
  uint64_t samples_per_pass;
} PoeSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses the same TOML document the CLI accepts and keeps its model.
 *
 * Run-control sections (`method`, `[weights]`, solver tables, ...) are
 * validated but otherwise unused here. On success `*out` owns the model;
 * release it with `poe_model_free`.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` to writable
 * storage for one pointer.
 */
enum PoeStatus poe_model_from_toml(const char *text, struct PoeModel **out);

/**
 * Releases a model handle. A null handle is a no-op.
 *
 * # Safety
 * `model` must be null or a pointer obtained from `poe_model_from_toml`
 * that has not been freed yet.
 */
void poe_model_free(struct PoeModel *model);

/**
 * Number of stations in the model; 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t poe_model_station_count(const struct PoeModel *model);

/**
 * Evaluates one policy exactly.
 *
 * `sequence` is a permutation of `0..len` (visit order) and `thresholds`
 * holds one cutoff per station; `len` must equal the station count.
 *
 * # Safety
 * `model` must be a live handle, `sequence` and `thresholds` must point to
 * `len` readable elements, and `out` to writable storage for one record.
 */
enum PoeStatus poe_evaluate_policy(const struct PoeModel *model,
                                   const size_t *sequence,
                                   const double *thresholds,
                                   size_t len,
                                   struct PoeEvaluation *out);

/**
 * Best visit order for a fixed threshold vector at cost weight
 * `cost_weight` (time weight is its complement).
 *
 * Writes the order into `sequence_out` and, when `fitness_out` is
 * non-null, the weighted fitness of that order.
 *
 * # Safety
 * `model` must be a live handle, `thresholds` must point to `len` readable
 * elements, `sequence_out` to `len` writable elements, and `fitness_out`
 * must be null or writable.
 */
enum PoeStatus poe_optimal_sequence(const struct PoeModel *model,
                                    const double *thresholds,
                                    size_t len,
                                    double cost_weight,
                                    size_t *sequence_out,
                                    double *fitness_out);

/**
 * Monte Carlo check of one policy: `n_samples` containers per pass, fully
 * determined by `seed`.
 *
 * # Safety
 * Same pointer contracts as `poe_evaluate_policy`.
 */
enum PoeStatus poe_simulate(const struct PoeModel *model,
                            const size_t *sequence,
                            const double *thresholds,
                            size_t len,
                            uint64_t n_samples,
                            uint64_t seed,
                            struct PoeSimulation *out);

/**
 * Copies this thread's last failure message into `buffer` and returns the
 * byte count the full message needs, including the trailing NUL.
 *
 * The message is empty (needed size 1) after any successful call. When
 * `buffer` is null or `capacity` is 0 nothing is copied; a return value
 * larger than `capacity` means the copy was truncated.
 *
 * # Safety
 * `buffer` must be null or point to `capacity` writable bytes.
 */
size_t poe_last_error_message(char *buffer, size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POE_INSPECT_H */
