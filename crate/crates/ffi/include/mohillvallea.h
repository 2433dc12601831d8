#ifndef MOHILLVALLEA_H
#define MOHILLVALLEA_H

#include <stddef.h>
#include <stdint.h>

typedef enum MohvStatus {
  MOHV_STATUS_OK = 0,
  MOHV_STATUS_NULL_POINTER = 1,
  MOHV_STATUS_INVALID_ARGUMENT = 2,
  MOHV_STATUS_UNKNOWN_PROBLEM = 3,
  MOHV_STATUS_DIMENSION_MISMATCH = 4,
  MOHV_STATUS_BUDGET_EXHAUSTED = 5,
  MOHV_STATUS_NO_REFERENCE = 6,
  MOHV_STATUS_INTERNAL = 7,
} MohvStatus;

// Opaque benchmark problem.
typedef struct MohvProblem MohvProblem;

// Opaque optimizer result.
typedef struct MohvResult MohvResult;

// Settings of [`mohv_run`]. Obtain defaults from [`mohv_run_config_default`].
typedef struct MohvRunConfig {
  uint64_t budget;
  uint64_t seed;
  // Fixed population size; 0 selects the multi-start scheme.
  uint32_t population_size;
  // Subsets per generation of a fixed population.
  uint32_t subsets;
  uint32_t archive_size;
  uint32_t approximation_size;
  // 0 = full, 1 = univariate, 2 = incremental full, 3 = incremental univariate.
  uint32_t variant;
  // Non-zero enables hill-valley clustering.
  uint8_t clustering;
  // Reference set size for final metrics; 0 skips them.
  uint32_t reference_points;
} MohvRunConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the message of the last failure on this thread into `buffer`
// (NUL terminated, truncated to `capacity`). Returns the full message length.
//
// # Safety
// `buffer` must be null or valid for `capacity` bytes.
uintptr_t mohv_last_error(char *buffer, uintptr_t capacity);

// Creates a problem by name, e.g. `sym-part1` or `mindist2-n10`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum MohvStatus mohv_problem_new(const char *name, struct MohvProblem **out);

// # Safety
// `problem` must be null or a handle from [`mohv_problem_new`] not yet freed.
void mohv_problem_free(struct MohvProblem *problem);

// Writes the decision and objective space dimensions.
//
// # Safety
// All pointers must be valid.
enum MohvStatus mohv_problem_dimensions(const struct MohvProblem *problem,
                                        uintptr_t *n,
                                        uintptr_t *m);

// Evaluates one decision vector of length `n` into `f` of length `m`.
//
// # Safety
// `x` must hold `n` values and `f` room for `m`.
enum MohvStatus mohv_problem_evaluate(const struct MohvProblem *problem,
                                      const double *x,
                                      uintptr_t n,
                                      double *f,
                                      uintptr_t m);

struct MohvRunConfig mohv_run_config_default(void);

// Runs the optimizer until the budget is spent.
//
// # Safety
// `problem` must be a live handle, `config` null (defaults) or valid, and
// `out` a valid pointer.
enum MohvStatus mohv_run(const struct MohvProblem *problem,
                         const struct MohvRunConfig *config,
                         struct MohvResult **out);

// # Safety
// `result` must be null or a handle from [`mohv_run`] not yet freed.
void mohv_result_free(struct MohvResult *result);

// Number of solutions in the approximation set; 0 for a null handle.
//
// # Safety
// `result` must be null or a live handle.
uintptr_t mohv_result_size(const struct MohvResult *result);

// Evaluations spent by the run; 0 for a null handle.
//
// # Safety
// `result` must be null or a live handle.
uint64_t mohv_result_evaluations(const struct MohvResult *result);

// Copies solution `index` of the approximation set.
//
// # Safety
// `x` must have room for `n` values and `f` for `m`.
enum MohvStatus mohv_result_solution(const struct MohvResult *result,
                                     uintptr_t index,
                                     double *x,
                                     uintptr_t n,
                                     double *f,
                                     uintptr_t m);

// Final IGD, IGDX and mode ratio of a run made with a reference set.
//
// # Safety
// All pointers must be valid.
enum MohvStatus mohv_result_metrics(const struct MohvResult *result,
                                    double *igd,
                                    double *igdx,
                                    double *mode_ratio);

// IGD, IGDX and mode ratio of `count` decision vectors against a reference
// set of `reference_points` points.
//
// # Safety
// `xs` must hold `count * n` values; output pointers must be valid.
enum MohvStatus mohv_metrics(const struct MohvProblem *problem,
                             const double *xs,
                             uintptr_t count,
                             uint32_t reference_points,
                             double *igd,
                             double *igdx,
                             double *mode_ratio);

// Multi-objective hill-valley clustering of `count` decision vectors.
// Writes the cluster index of every vector to `labels` and the number of
// clusters to `clusters`.
//
// # Safety
// `xs` must hold `count * n` values and `labels` room for `count`.
enum MohvStatus mohv_cluster(const struct MohvProblem *problem,
                             const double *xs,
                             uintptr_t count,
                             uintptr_t *labels,
                             uintptr_t *clusters);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOHILLVALLEA_H */
