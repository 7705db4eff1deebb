//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rlqn/driver.hpp"

namespace rlqn {

struct ResultRow {
  std::string problem;
  std::int64_t n = 0;
  std::string algo;
  std::string status;
  std::int64_t fevals = 0;
  std::int64_t gevals = 0;
  std::int64_t iters = 0;
  double accepted_ratio = 0.0;
  double final_g_inf = 0.0;
  double final_f = 0.0;
  double wall_ms = 0.0;

  bool converged() const { return status == "Converged"; }
  bool operator==(const ResultRow &) const = default;
};

struct ProblemSpec {
  std::string name;
  Index n = 0;
  double param = 0.0;  // 0 = problem default

  /// Name used in result tables; carries the parameter when one was given.
  std::string label() const;
};

/// Parses "name[:n[:param]],..." or "all". Entries without n use
/// `default_n`. Throws UnknownProblem or ConfigError.
std::vector<ProblemSpec> parse_problem_list(std::string_view list,
                                            Index default_n);

/// Parses a comma-separated algorithm list or "all". Throws UnknownAlgo,
/// including for an empty list.
std::vector<std::string> parse_algo_list(std::string_view list);

struct SuiteOptions {
  SolverConfig cfg;
  int threads = 1;
};

/// Runs every (algorithm, problem) pair, each on its own Problem instance.
/// Rows come back sorted by problem, n, algorithm. Problems are instantiated
/// once up front so that bad dimensions fail before any run starts.
std::vector<ResultRow> run_suite(const std::vector<std::string> &algos,
                                 const std::vector<ProblemSpec> &problems,
                                 const SuiteOptions &options);

ResultRow make_row(const ProblemSpec &problem, const std::string &algo,
                   const RunReport &report, double wall_ms);

inline constexpr std::string_view kResultsHeader
    = "problem,n,algo,status,fevals,gevals,iters,accepted_ratio,final_g_inf,"
      "final_f,wall_ms";
inline constexpr std::string_view kProfileHeader = "algo,tau,rho";

/// Doubles are written with 17 significant digits, so reading the output
/// back reproduces every row exactly. Non-finite values appear as inf/nan.
void write_results_csv(std::ostream &out, const std::vector<ResultRow> &rows);

/// Throws std::runtime_error with the offending line number on malformed
/// input.
std::vector<ResultRow> read_results_csv(std::istream &in);

struct ProfilePoint {
  double tau = 1.0;
  double rho = 0.0;
};

struct ProfileCurve {
  std::string algo;
  std::vector<ProfilePoint> points;  // tau ascending

  /// Right-continuous step function value at tau.
  double rho_at(double tau) const;
};

/// Performance profiles over function evaluations. Rows that did not
/// converge count as infinite cost. Problems are keyed by (problem, n).
/// Throws DuplicateRow when a (problem, n, algo) triple repeats.
std::vector<ProfileCurve> perf_profile(const std::vector<ResultRow> &rows,
                                       bool drop_all_fail = false);

void write_profile_csv(std::ostream &out,
                       const std::vector<ProfileCurve> &curves);

struct AcceptanceSummary {
  std::string algo;
  double mean_accepted_ratio = 0.0;
  std::int64_t rows = 0;
  std::int64_t converged = 0;
};

/// Mean accepted_ratio per algorithm, sorted by algorithm name.
std::vector<AcceptanceSummary>
acceptance_summary(const std::vector<ResultRow> &rows);

}  // namespace rlqn
