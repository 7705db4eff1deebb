//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "rlqn/problems.hpp"

namespace rlqn {

struct LineSearchParams {
  double c1 = 1e-4;   // sufficient decrease
  double c2 = 0.9;    // curvature (strong Wolfe)
  double t_min = 1e-15;
  double t_max = 1e15;
  int max_evals = 50;
  double xtol = 1e-10;
  // extrapolation bounds before a bracket exists, relative to the last
  // step length
  double extrap_lower = 1.1;
  double extrap_upper = 2.0;
};

struct SearchOutcome {
  double t = 0.0;
  double f_new = 0.0;
  Eigen::VectorXd x_new;
  std::optional<Eigen::VectorXd> g_new;
  int fevals = 0;
  bool converged = false;
};

/// Halves t from 1 until f(x + t d) <= f_ref + c1 t g_dot_d. Evaluates f
/// only. Throws NotDescent when g_dot_d >= 0.
SearchOutcome armijo_backtrack(Problem &problem, const Eigen::VectorXd &x,
                               const Eigen::VectorXd &d, double f_ref,
                               double g_dot_d,
                               const LineSearchParams &params = {});

/// Scalar function phi(t) returning phi and writing phi'(t). May throw
/// NonFiniteValue, which shrinks the step toward the best point so far.
using ScalarFunction = std::function<double(double t, double &dphi)>;

struct ScalarSearchResult {
  double t = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Moré-Thuente search for t with phi(t) <= phi0 + c1 t dphi0 and
/// |phi'(t)| <= c2 |dphi0|. `phi0` plays the role of the reference value
/// (it may exceed phi(0) in nonmonotone use).
ScalarSearchResult more_thuente_1d(const ScalarFunction &phi, double phi0,
                                   double dphi0, double t0,
                                   const LineSearchParams &params = {});

/// Strong Wolfe search along d; evaluates f and g together at every trial.
/// Throws NotDescent when g_dot_d >= 0.
SearchOutcome more_thuente(Problem &problem, const Eigen::VectorXd &x,
                           const Eigen::VectorXd &d, double f_ref,
                           double g_dot_d, double t0 = 1.0,
                           const LineSearchParams &params = {});

struct SeedResult {
  Eigen::VectorXd x1;
  double f1 = 0.0;
  Eigen::VectorXd g1;
  Eigen::VectorXd s0;
  Eigen::VectorXd y0;
  int fevals = 0;
};

/// One strong Wolfe search from x0 along -g0 / ||g0||, unit initial step.
/// Throws LineSearchFailed when the search does not converge and
/// std::invalid_argument when g0 is zero.
SeedResult initial_seed_search(Problem &problem, const Eigen::VectorXd &x0,
                               double f0, const Eigen::VectorXd &g0,
                               const LineSearchParams &params = {});

}  // namespace rlqn
