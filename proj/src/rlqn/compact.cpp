//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/compact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlqn/errors.hpp"

namespace rlqn {

namespace {
  Eigen::MatrixXd strict_lower(const Eigen::MatrixXd &m) {
    return m.triangularView<Eigen::StrictlyLower>();
  }

  Eigen::MatrixXd diagonal_part(const Eigen::MatrixXd &m) {
    return m.diagonal().asDiagonal();
  }

  Eigen::MatrixXd bfgs_middle(const MemoryState &mem) {
    const Index k = mem.cols();
    const double gamma = mem.gamma();
    const Eigen::MatrixXd l = strict_lower(mem.gram_sy());
    Eigen::MatrixXd q(2 * k, 2 * k);
    q << -mem.gram_ss() / gamma, -l / gamma, -l.transpose() / gamma,
        diagonal_part(mem.gram_sy());
    return q;
  }

  Eigen::MatrixXd sr1_middle(const MemoryState &mem) {
    const Eigen::MatrixXd l = strict_lower(mem.gram_sy());
    return diagonal_part(mem.gram_sy()) + l + l.transpose()
           - mem.gamma() * mem.gram_ss();
  }

  // Scalar-initial PSB middle matrix written against A = [S Y]:
  // [[0, U], [U^T, D(SY) + L(SY) + L(SY)^T + gamma D(SS)]]
  Eigen::MatrixXd psb_middle(const MemoryState &mem) {
    const Index k = mem.cols();
    const Eigen::MatrixXd u = mem.gram_ss().triangularView<Eigen::Upper>();
    const Eigen::MatrixXd l = strict_lower(mem.gram_sy());
    Eigen::MatrixXd q(2 * k, 2 * k);
    q << Eigen::MatrixXd::Zero(k, k), u, u.transpose(),
        diagonal_part(mem.gram_sy()) + l + l.transpose()
            + mem.gamma() * diagonal_part(mem.gram_ss());
    return q;
  }

  Eigen::MatrixXd symmetrized(const Eigen::MatrixXd &m) {
    return 0.5 * (m + m.transpose());
  }

  // Fills g_dot_d, d_norm2 and pred from the caches, given repr.
  void finish_plan(const MemoryState &mem, double g_norm2, StepPlan &plan) {
    const double gh = plan.gamma_hat;
    if (mem.empty() || !plan.solvable) {
      plan.g_dot_d = -g_norm2 / gh;
      plan.d_norm2 = g_norm2 / (gh * gh);
    } else {
      const Eigen::VectorXd &c = plan.repr.coeffs;
      const double atg_c = mem.sg().dot(c.head(mem.cols()))
                           + mem.yg().dot(c.tail(mem.cols()));
      const double ctgc = c.dot(mem.gram() * c);
      plan.g_dot_d = -g_norm2 / gh + atg_c;
      plan.d_norm2 = std::max(0.0, g_norm2 / (gh * gh) - 2.0 * atg_c / gh
                                       + ctgc);
    }
    plan.pred = 0.5 * plan.mu * plan.d_norm2 - 0.5 * plan.g_dot_d;
  }

  void plan_compact(const MemoryState &mem, Scheme scheme, StepPlan &plan) {
    const Index k = mem.cols();
    const double gh = plan.gamma_hat;
    const ABlocks blocks = assemble_A_blocks(mem, scheme);

    Eigen::MatrixXd q;
    switch (scheme) {
    case Scheme::kBfgs:
    case Scheme::kBfgsSecant:
      q = bfgs_middle(mem);
      break;
    case Scheme::kSr1:
      q = sr1_middle(mem);
      break;
    case Scheme::kPsb:
      q = psb_middle(mem);
      break;
    }

    const SymMatrix inner
        = SymMatrix::from_dense(symmetrized(q + blocks.AtA.dense() / gh));

    SymSolveResult solved;
    if (scheme == Scheme::kSr1) {
      solved = sym_solve_skipping(inner, blocks.Atg, kSr1SkipTolerance);
      plan.skipped = solved.skipped;
      if (solved.status == SolveStatus::kAllSkipped
          && static_cast<Index>(solved.skipped.size()) == k) {
        // every pair dropped: the step comes from the initial matrix alone
        plan.p = Eigen::VectorXd::Zero(k);
        plan.repr.coeffs = Eigen::VectorXd::Zero(2 * k);
        return;
      }
    } else {
      solved = sym_solve(inner, blocks.Atg);
    }

    if (!solved.ok()) {
      plan.solvable = false;
      return;
    }

    plan.p = solved.x;
    plan.repr.coeffs.resize(2 * k);
    const double scale = 1.0 / (gh * gh);
    if (scheme == Scheme::kSr1) {
      // (Y - gamma S) p in the [S Y] basis
      plan.repr.coeffs << -mem.gamma() * scale * plan.p, scale * plan.p;
    } else {
      plan.repr.coeffs = scale * plan.p;
    }
  }

  // Two-loop recursion on (s_i, y_i + mu s_i) with H0 = 1 / (gamma + mu),
  // carried out on coefficient vectors so that every inner product comes
  // from the Gram caches.
  void plan_two_loop(const MemoryState &mem, StepPlan &plan) {
    const Index k = mem.cols();
    const double mu = plan.mu;
    const double h0 = 1.0 / plan.gamma_hat;
    const Eigen::MatrixXd &ss = mem.gram_ss();
    const Eigen::MatrixXd &sy = mem.gram_sy();
    const Eigen::MatrixXd &yy = mem.gram_yy();

    // s_i^T y'_j, y'_i^T y'_j, y'_i^T g
    const Eigen::MatrixXd s_yp = sy + mu * ss;
    const Eigen::MatrixXd yp_yp
        = yy + mu * (sy + sy.transpose()) + mu * mu * ss;
    const Eigen::VectorXd yp_g = mem.yg() + mu * mem.sg();

    Eigen::VectorXd rho(k);
    for (Index i = 0; i < k; ++i) {
      const double curv = s_yp(i, i);
      if (!(curv > 0.0) || !std::isfinite(curv)) {
        plan.solvable = false;
        return;
      }
      rho[i] = 1.0 / curv;
    }

    // q = g + sum_j a_j y'_j
    Eigen::VectorXd a = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd alpha(k);
    for (Index i = k - 1; i >= 0; --i) {
      const double s_q = mem.sg()[i] + s_yp.row(i).dot(a);
      alpha[i] = rho[i] * s_q;
      a[i] -= alpha[i];
    }

    // r = h0 q + sum_j b_j s_j
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    for (Index i = 0; i < k; ++i) {
      const double yp_r = h0 * (yp_g[i] + yp_yp.row(i).dot(a))
                          + s_yp.col(i).dot(b);
      const double beta = rho[i] * yp_r;
      b[i] += alpha[i] - beta;
    }

    // d = -r = -h0 g - h0 sum a_j (y_j + mu s_j) - sum b_j s_j
    plan.repr.coeffs.resize(2 * k);
    plan.repr.coeffs << -h0 * mu * a - b, -h0 * a;
  }
}  // namespace

SymMatrix middle_matrix(const MemoryState &mem, Scheme scheme) {
  if (mem.empty())
    throw EmptyMemory();
  switch (scheme) {
  case Scheme::kBfgs:
  case Scheme::kBfgsSecant:
    return SymMatrix::from_dense(symmetrized(bfgs_middle(mem)));
  case Scheme::kSr1:
    return SymMatrix::from_dense(symmetrized(sr1_middle(mem)));
  case Scheme::kPsb:
    return SymMatrix::from_dense(symmetrized(psb_middle(mem)));
  }
  throw std::logic_error("middle_matrix: unknown scheme");
}

StepPlan plan_regularized_step(const MemoryState &mem, Scheme scheme,
                               double g_norm2, double mu) {
  if (!(mu >= 0.0))
    throw std::invalid_argument("regularization parameter must be >= 0");

  StepPlan plan;
  plan.scheme = scheme;
  plan.mu = mu;
  plan.gamma_hat = mem.gamma() + mu;
  plan.repr.gamma_hat = plan.gamma_hat;

  if (!mem.empty()) {
    if (scheme == Scheme::kBfgsSecant)
      plan_two_loop(mem, plan);
    else
      plan_compact(mem, scheme, plan);
  }
  if (plan.solvable && plan.repr.coeffs.size() > 0
      && !plan.repr.coeffs.allFinite())
    plan.solvable = false;

  finish_plan(mem, g_norm2, plan);
  return plan;
}

void form_direction(const MemoryState &mem, const StepPlan &plan,
                    const Eigen::VectorXd &g, Eigen::VectorXd &d,
                    WorkCounter *wc) {
  if (g.size() != mem.dimension())
    throw DimensionMismatch("form_direction: gradient length");
  if (!plan.solvable)
    throw std::logic_error("form_direction: step is not solvable");

  if (mem.empty()) {
    kernels::scale(-1.0 / plan.gamma_hat, g, d, wc);
    return;
  }

  Eigen::VectorXd low_rank;
  if (plan.scheme == Scheme::kSr1) {
    mem.multiply_sr1_basis(plan.p / (plan.gamma_hat * plan.gamma_hat),
                           low_rank, wc);
  } else {
    mem.multiply_basis(plan.repr.coeffs, low_rank, wc);
  }
  kernels::scale(-1.0 / plan.gamma_hat, g, d, wc);
  d += low_rank;
}

double predicted_reduction(const Eigen::VectorXd &d, const Eigen::VectorXd &g,
                           double mu) {
  if (d.size() != g.size())
    throw DimensionMismatch("predicted_reduction: lengths differ");
  return 0.5 * mu * d.squaredNorm() - 0.5 * g.dot(d);
}

StepResult regularized_step(const MemoryState &mem, Scheme scheme,
                            const Eigen::VectorXd &g, double mu) {
  MemoryState local = mem;
  local.register_gradient(g);
  const StepPlan plan = plan_regularized_step(local, scheme, g.squaredNorm(),
                                              mu);
  StepResult out;
  out.solvable = plan.solvable;
  out.skipped = plan.skipped;
  out.p = plan.p;
  if (plan.solvable) {
    form_direction(local, plan, g, out.d);
    out.pred = predicted_reduction(out.d, g, mu);
  }
  return out;
}

StepResult bfgs_step(const MemoryState &mem, const Eigen::VectorXd &g,
                     double mu) {
  return regularized_step(mem, Scheme::kBfgs, g, mu);
}

StepResult sr1_step(const MemoryState &mem, const Eigen::VectorXd &g,
                    double mu) {
  return regularized_step(mem, Scheme::kSr1, g, mu);
}

StepResult psb_step(const MemoryState &mem, const Eigen::VectorXd &g,
                    double mu) {
  return regularized_step(mem, Scheme::kPsb, g, mu);
}

StepResult secant_two_loop_step(const MemoryState &mem,
                                const Eigen::VectorXd &g, double mu) {
  return regularized_step(mem, Scheme::kBfgsSecant, g, mu);
}

}  // namespace rlqn
