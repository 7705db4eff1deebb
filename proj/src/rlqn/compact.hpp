//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include <Eigen/Core>

#include "rlqn/densecore.hpp"
#include "rlqn/memory.hpp"

namespace rlqn {

/// Relative pivot threshold for skipping SR1 pairs inside the regularized
/// inner factorization.
inline constexpr double kSr1SkipTolerance = 1e-8;

/// Everything about a regularized step that can be computed from the memory
/// caches alone, before any n-length work.
///
/// The direction is d = -g / gamma_hat + [S Y] * repr.coeffs. g_dot_d and
/// d_norm2 are derived from the Gram caches, so a step can be screened by
/// the sufficient-decrease test without forming d.
struct StepPlan {
  Scheme scheme = Scheme::kBfgs;
  bool solvable = true;
  double mu = 0.0;
  double gamma_hat = 1.0;
  Eigen::VectorXd p;  // inner solution; empty for the two-loop engine
  StepRepresentation repr;
  std::vector<Index> skipped;
  double g_dot_d = 0.0;
  double d_norm2 = 0.0;
  double pred = 0.0;
};

/// Plans d = -(B + mu I)^{-1} g. `g_norm2` is ||g||^2 for the gradient
/// registered in `mem`. An empty store yields d = -g / (gamma + mu).
StepPlan plan_regularized_step(const MemoryState &mem, Scheme scheme,
                               double g_norm2, double mu);

/// Materializes the planned direction. SR1 uses the explicit Y - gamma S
/// basis (cols * n work); the other schemes use [S Y] (2 * cols * n).
void form_direction(const MemoryState &mem, const StepPlan &plan,
                    const Eigen::VectorXd &g, Eigen::VectorXd &d,
                    WorkCounter *wc = nullptr);

struct StepResult {
  Eigen::VectorXd d;
  Eigen::VectorXd p;
  double pred = 0.0;
  std::vector<Index> skipped;
  bool solvable = true;
};

/// (mu / 2) ||d||^2 - (1 / 2) g^T d
double predicted_reduction(const Eigen::VectorXd &d, const Eigen::VectorXd &g,
                           double mu);

// The step functions below register `g` against a copy of `mem`, so the
// caller's store need not hold g. pred is evaluated directly on d.
StepResult bfgs_step(const MemoryState &mem, const Eigen::VectorXd &g,
                     double mu);
StepResult sr1_step(const MemoryState &mem, const Eigen::VectorXd &g,
                    double mu);
StepResult psb_step(const MemoryState &mem, const Eigen::VectorXd &g,
                    double mu);
StepResult secant_two_loop_step(const MemoryState &mem,
                                const Eigen::VectorXd &g, double mu);

StepResult regularized_step(const MemoryState &mem, Scheme scheme,
                            const Eigen::VectorXd &g, double mu);

/// Middle matrix Q of B = gamma I + A Q^{-1} A^T for the given scheme, built
/// from the Gram caches (A as in assemble_A_blocks).
SymMatrix middle_matrix(const MemoryState &mem, Scheme scheme);

}  // namespace rlqn
