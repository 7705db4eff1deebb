//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rlqn/densecore.hpp"

namespace rlqn {

/// Differentiable objective with analytic gradient and evaluation counters.
///
/// Subclasses implement compute(); the public entry points count calls and
/// reject non-finite results with NonFiniteValue (the call is still
/// counted).
class Problem {
public:
  Problem(std::string name, Index n);
  virtual ~Problem() = default;

  Problem(const Problem &) = delete;
  Problem &operator=(const Problem &) = delete;

  const std::string &name() const { return name_; }
  Index dimension() const { return n_; }
  virtual Eigen::VectorXd initial_point() const = 0;

  double value(const Eigen::VectorXd &x);
  double value_and_gradient(const Eigen::VectorXd &x, Eigen::VectorXd &g);
  void gradient(const Eigen::VectorXd &x, Eigen::VectorXd &g);

  std::int64_t feval_count() const { return fevals_; }
  std::int64_t geval_count() const { return gevals_; }
  void reset_counters() { fevals_ = gevals_ = 0; }

protected:
  /// Returns f(x); writes the gradient when `g` is non-null.
  virtual double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const = 0;

private:
  void check_point(const Eigen::VectorXd &x) const;

  std::string name_;
  Index n_;
  std::int64_t fevals_ = 0;
  std::int64_t gevals_ = 0;
};

/// Central-difference gradient check; returns
/// max_i |g_i - fd_i| / max(1, |g_i|).
double grad_check(Problem &problem, const Eigen::VectorXd &x, double h);

/// Names accepted by make_problem, in suite order.
const std::vector<std::string> &problem_names();

/// Builds a suite problem. `param` is the condition number for `quadratic`
/// (default n) and ignored elsewhere. Throws UnknownProblem or
/// DimensionMismatch (n invalid for the problem).
std::unique_ptr<Problem> make_problem(std::string_view name, Index n,
                                      double param = 0.0);

}  // namespace rlqn
