#ifndef BORDERFJ_H
#define BORDERFJ_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Regularity of the final extended matrix.
 */
typedef enum BfjMatrixStatus {
  BFJ_MATRIX_STATUS_REGULAR = 0,
  BFJ_MATRIX_STATUS_SINGULAR = 1,
} BfjMatrixStatus;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum BfjStatus {
  BFJ_STATUS_OK = 0,
  BFJ_STATUS_NULL_POINTER = 1,
  BFJ_STATUS_INVALID_UTF8 = 2,
  BFJ_STATUS_PARSE = 3,
  BFJ_STATUS_REDUCE = 4,
  BFJ_STATUS_OUT_OF_RANGE = 5,
  BFJ_STATUS_UNAVAILABLE = 6,
} BfjStatus;

/**
 * The outcome of a reduction.
 */
typedef struct BfjReport BfjReport;

/**
 * A parsed system definition.
 */
typedef struct BfjSystem BfjSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a system from its text form.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum BfjStatus bfj_system_from_str(const char *text, struct BfjSystem **out);

/**
 * Parses a system from a file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum BfjStatus bfj_system_from_file(const char *path, struct BfjSystem **out);

/**
 * # Safety
 * `system` must come from `bfj_system_from_*` and not be freed twice.
 */
void bfj_system_free(struct BfjSystem *system);

/**
 * Runs the reduction. `max_iterations` of 0 selects the default cap.
 *
 * # Safety
 * `system` must be a live handle and `out` a valid pointer.
 */
enum BfjStatus bfj_reduce(const struct BfjSystem *system,
                          uint64_t seed,
                          uint32_t max_iterations,
                          struct BfjReport **out);

/**
 * # Safety
 * `report` must come from `bfj_reduce` and not be freed twice.
 */
void bfj_report_free(struct BfjReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
enum BfjMatrixStatus bfj_report_status(const struct BfjReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
uint32_t bfj_report_iteration_count(const struct BfjReport *report);

/**
 * Side length of the extended matrix.
 *
 * # Safety
 * `report` must be a live handle.
 */
size_t bfj_report_dimension(const struct BfjReport *report);

/**
 * The full JSON report, including the co-vanishing verdict and the degeneracy
 * locus. Returns NULL on failure.
 *
 * # Safety
 * `report` must be a live handle. Free the result with `bfj_string_free`.
 */
char *bfj_report_json(const struct BfjReport *report);

/**
 * The human-readable summary. Returns NULL on failure.
 *
 * # Safety
 * `report` must be a live handle. Free the result with `bfj_string_free`.
 */
char *bfj_report_summary(const struct BfjReport *report);

/**
 * Entry `(row, col)` of the inverse extended matrix as a string.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer. Free `*out`
 * with `bfj_string_free`.
 */
enum BfjStatus bfj_report_inverse_entry(const struct BfjReport *report,
                                        size_t row,
                                        size_t col,
                                        char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void bfj_string_free(char *s);

/**
 * Message for the last failure on this thread, or NULL. The pointer stays
 * valid until the next call into the library on the same thread.
 */
const char *bfj_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BORDERFJ_H */
