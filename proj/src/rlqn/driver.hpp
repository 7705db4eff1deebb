//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rlqn/densecore.hpp"
#include "rlqn/memory.hpp"
#include "rlqn/problems.hpp"

namespace rlqn {

struct SolverConfig {
  Index m = 5;
  double mu0 = 1.0;
  double p_min = 1e-4;
  double c1 = 1e-4;
  double c2 = 0.9;
  double sigma1 = 0.5;
  double sigma2 = 4.0;
  double mu_min = 1e-4;
  double mu_max = 1e15;
  double eps_cautious = 1e-8;
  double tol_g = 1e-4;  // infinity norm
  std::int64_t max_iters = 100000;
  int nonmonotone_M = 0;  // 0 = monotone
  Scheme scheme = Scheme::kBfgs;
  double t_min = 1e-15;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

enum class RunStatus {
  kConverged,
  kMaxIters,
  kMuOverflow,
  kLineSearchFail,
  kNumericalError,
};

std::string_view status_name(RunStatus status);
/// Inverse of status_name; throws std::invalid_argument.
RunStatus parse_status(std::string_view name);

enum class StepClass { kUnsuccessful, kSuccessful, kHighlySuccessful };

std::string_view step_class_name(StepClass cls);

struct IterationRecord {
  std::int64_t k = 0;
  double f = 0.0;      // at the iterate the step started from
  double g_inf = 0.0;
  double mu = 0.0;     // regularization used, or step length for baselines
  double pred = 0.0;
  double ared = 0.0;
  double rho = 0.0;
  bool evaluated = false;  // the trial point cost a function evaluation
  StepClass cls = StepClass::kUnsuccessful;
  WorkCounter work;        // n-length work spent on this iteration
};

struct RunReport {
  RunStatus status = RunStatus::kNumericalError;
  std::int64_t iters = 0;
  std::int64_t fevals = 0;
  std::int64_t gevals = 0;
  std::int64_t seed_fevals = 0;
  std::int64_t accepted_steps = 0;
  double final_g_inf = 0.0;
  double final_f = 0.0;
  double final_mu = 0.0;
  Eigen::VectorXd x;
  std::vector<IterationRecord> trace;

  /// accepted_steps / iters; 1 when no iteration was needed.
  double accepted_ratio() const;
};

struct MuUpdate {
  StepClass cls;
  double mu_next;
  double rho;  // NaN when the ratio test was not reached
};

/// Step 2 and Step 3 of the regularized method: screens the step with the
/// sufficient-decrease inequality, then classifies by rho = ared / pred.
MuUpdate classify_and_update_mu(bool solvable, double pred, double ared,
                                double d_norm, double g_norm, double mu,
                                const SolverConfig &cfg);

/// Reference value for the ratio test. `history` holds the most recent
/// iterate values, newest last (at least one entry).
double nonmonotone_ref(const std::deque<double> &history, std::int64_t k,
                       int M);

struct RunOptions {
  bool keep_trace = false;
  /// Lets tests tamper with each direction before it is used.
  std::function<void(Eigen::VectorXd &d)> direction_hook;
};

RunReport run_regularized(Problem &problem, const SolverConfig &cfg,
                          const RunOptions &opts = {});

enum class SearchKind { kArmijo, kWolfe };

/// L-BFGS with a line search. Here `iters` counts trial evaluations and
/// `accepted_steps` counts completed line searches, so the accepted ratio
/// measures how often the first trial was not enough.
RunReport run_linesearch_lbfgs(Problem &problem, const SolverConfig &cfg,
                               SearchKind kind, const RunOptions &opts = {});

struct AlgoSpec {
  std::string name;
  bool regularized = true;
  Scheme scheme = Scheme::kBfgs;
  SearchKind search = SearchKind::kArmijo;
};

/// regLBFGS, regLBFGSsec, regLSR1, regLPSB, armijoLBFGS, wolfeLBFGS.
const std::vector<AlgoSpec> &algorithms();

/// Throws UnknownAlgo.
const AlgoSpec &find_algorithm(std::string_view name);

/// Runs a named algorithm; cfg.scheme is overridden by the algorithm.
RunReport run_algorithm(const AlgoSpec &algo, Problem &problem,
                        SolverConfig cfg, const RunOptions &opts = {});

}  // namespace rlqn
