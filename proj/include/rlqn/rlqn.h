/*
 * rlqn - regularized limited-memory quasi-Newton methods
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface. Every object is an opaque handle owned by the caller and
 * released with its _destroy function. Functions return RLQN_OK or an error
 * code; rlqn_last_error() then describes the most recent failure on the
 * calling thread.
 */
#ifndef RLQN_RLQN_H
#define RLQN_RLQN_H

#include <stddef.h>
#include <stdint.h>

#if defined(RLQN_BUILDING_LIBRARY)
#define RLQN_API __attribute__((visibility("default")))
#else
#define RLQN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rlqn_status {
  RLQN_OK = 0,
  RLQN_ERR_INVALID_ARGUMENT = 1,
  RLQN_ERR_UNKNOWN_PROBLEM = 2,
  RLQN_ERR_UNKNOWN_ALGO = 3,
  RLQN_ERR_DIMENSION = 4,
  RLQN_ERR_IO = 5,
  RLQN_ERR_PARSE = 6,
  RLQN_ERR_DUPLICATE_ROW = 7,
  RLQN_ERR_NUMERICAL = 8,
  RLQN_ERR_INTERNAL = 9
} rlqn_status;

RLQN_API const char *rlqn_version(void);
RLQN_API const char *rlqn_last_error(void);
RLQN_API const char *rlqn_status_string(rlqn_status status);

/* ---- problems ---------------------------------------------------------- */

typedef struct rlqn_problem rlqn_problem;

RLQN_API size_t rlqn_problem_name_count(void);
RLQN_API const char *rlqn_problem_name_at(size_t index);

/* param: condition number for "quadratic", 0 for the default. */
RLQN_API rlqn_status rlqn_problem_create(const char *name, int64_t n,
                                         double param, rlqn_problem **out);
RLQN_API void rlqn_problem_destroy(rlqn_problem *problem);
RLQN_API int64_t rlqn_problem_dimension(const rlqn_problem *problem);
RLQN_API rlqn_status rlqn_problem_initial_point(const rlqn_problem *problem,
                                                double *x, size_t len);
/* g may be NULL to evaluate f only. */
RLQN_API rlqn_status rlqn_problem_eval(rlqn_problem *problem, const double *x,
                                       size_t len, double *f, double *g);
RLQN_API rlqn_status rlqn_problem_grad_check(rlqn_problem *problem,
                                             const double *x, size_t len,
                                             double h, double *max_rel_err);
RLQN_API void rlqn_problem_counters(const rlqn_problem *problem,
                                    int64_t *fevals, int64_t *gevals);

/* ---- solver configuration ---------------------------------------------- */

typedef struct rlqn_config rlqn_config;

RLQN_API rlqn_status rlqn_config_create(rlqn_config **out);
RLQN_API void rlqn_config_destroy(rlqn_config *cfg);
/* Keys: m, mu0, p_min, c1, c2, sigma1, sigma2, mu_min, mu_max,
 * eps_cautious, tol_g, max_iters, nonmonotone, t_min, threads. */
RLQN_API rlqn_status rlqn_config_set(rlqn_config *cfg, const char *key,
                                     double value);
RLQN_API rlqn_status rlqn_config_get(const rlqn_config *cfg, const char *key,
                                     double *value);
/* Checks the parameter constraints without running anything. */
RLQN_API rlqn_status rlqn_config_validate(const rlqn_config *cfg);

/* ---- single runs ------------------------------------------------------- */

typedef struct rlqn_report rlqn_report;

typedef struct rlqn_report_summary {
  const char *status; /* static string */
  int64_t iters;
  int64_t fevals;
  int64_t gevals;
  int64_t seed_fevals;
  int64_t accepted_steps;
  double accepted_ratio;
  double final_g_inf;
  double final_f;
  double final_mu;
} rlqn_report_summary;

RLQN_API size_t rlqn_algo_count(void);
RLQN_API const char *rlqn_algo_name_at(size_t index);

/* cfg may be NULL for defaults. */
RLQN_API rlqn_status rlqn_solve(const char *algo, rlqn_problem *problem,
                                const rlqn_config *cfg, int keep_trace,
                                rlqn_report **out);
RLQN_API void rlqn_report_destroy(rlqn_report *report);
RLQN_API rlqn_status rlqn_report_get_summary(const rlqn_report *report,
                                             rlqn_report_summary *out);
RLQN_API rlqn_status rlqn_report_solution(const rlqn_report *report,
                                          double *x, size_t len);
/* Writes the per-iteration trace (empty unless keep_trace was set). */
RLQN_API rlqn_status rlqn_report_write_trace(const rlqn_report *report,
                                             const char *path);

/* ---- benchmark tables -------------------------------------------------- */

typedef struct rlqn_results rlqn_results;

typedef struct rlqn_result_row {
  const char *problem; /* valid while the results handle lives */
  int64_t n;
  const char *algo;
  const char *status;
  int64_t fevals;
  int64_t gevals;
  int64_t iters;
  double accepted_ratio;
  double final_g_inf;
  double final_f;
  double wall_ms;
} rlqn_result_row;

/* algos: comma list or "all"; problems: "name[:n[:param]],..." or "all". */
RLQN_API rlqn_status rlqn_bench_run(const char *algos, const char *problems,
                                    int64_t default_n, const rlqn_config *cfg,
                                    rlqn_results **out);
RLQN_API rlqn_status rlqn_results_read(const char *path, rlqn_results **out);
RLQN_API rlqn_status rlqn_results_write(const rlqn_results *results,
                                        const char *path);
RLQN_API void rlqn_results_destroy(rlqn_results *results);
RLQN_API size_t rlqn_results_count(const rlqn_results *results);
RLQN_API rlqn_status rlqn_results_row(const rlqn_results *results,
                                      size_t index, rlqn_result_row *out);

/* Mean accepted ratio per algorithm, sorted by name. */
RLQN_API size_t rlqn_results_algo_count(const rlqn_results *results);
RLQN_API rlqn_status rlqn_results_acceptance(const rlqn_results *results,
                                             size_t index, const char **algo,
                                             double *mean_ratio, int64_t *rows,
                                             int64_t *converged);

/* ---- performance profiles ---------------------------------------------- */

typedef struct rlqn_profile rlqn_profile;

RLQN_API rlqn_status rlqn_profile_compute(const rlqn_results *results,
                                          int drop_all_fail,
                                          rlqn_profile **out);
RLQN_API void rlqn_profile_destroy(rlqn_profile *profile);
RLQN_API rlqn_status rlqn_profile_write(const rlqn_profile *profile,
                                        const char *path);
RLQN_API rlqn_status rlqn_profile_rho_at(const rlqn_profile *profile,
                                         const char *algo, double tau,
                                         double *rho);

#ifdef __cplusplus
}
#endif

#endif /* RLQN_RLQN_H */
