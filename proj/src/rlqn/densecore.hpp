//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace rlqn {

using Index = Eigen::Index;

/// Relative pivot threshold used by sym_solve.
inline constexpr double kPivotTolerance = 1e-12;

/// Tallies multiplications performed on vectors of length n.
///
/// `matvec` counts products against the tall n-by-k memory blocks
/// (S, Y, or the explicit SR1 basis); `vector` counts elementwise and
/// dot-product work on single n-vectors. Work on k-by-k quantities is not
/// counted.
struct WorkCounter {
  std::uint64_t matvec = 0;
  std::uint64_t vector = 0;

  std::uint64_t total() const { return matvec + vector; }

  WorkCounter operator-(const WorkCounter &rhs) const {
    return {matvec - rhs.matvec, vector - rhs.vector};
  }
};

namespace kernels {
  double dot(const Eigen::VectorXd &a, const Eigen::VectorXd &b,
             WorkCounter *wc);
  double squared_norm(const Eigen::VectorXd &a, WorkCounter *wc);
  // out = alpha * a
  void scale(double alpha, const Eigen::VectorXd &a, Eigen::VectorXd &out,
             WorkCounter *wc);
}  // namespace kernels

/// Small dense symmetric matrix. Both triangles are stored and kept equal.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(Index order);

  /// Throws std::invalid_argument if `m` is not square or not symmetric to
  /// within 1e-12 relative; the stored matrix is the symmetrized input.
  static SymMatrix from_dense(const Eigen::MatrixXd &m);

  Index order() const { return data_.rows(); }
  double operator()(Index i, Index j) const { return data_(i, j); }
  void set(Index i, Index j, double v) {
    data_(i, j) = v;
    data_(j, i) = v;
  }
  const Eigen::MatrixXd &dense() const { return data_; }

private:
  Eigen::MatrixXd data_;
};

enum class SolveStatus { kOk, kSingular, kAllSkipped };

struct SymSolveResult {
  SolveStatus status = SolveStatus::kOk;
  Eigen::VectorXd x;
  std::vector<Index> skipped;

  bool ok() const { return status == SolveStatus::kOk; }
};

/// Solves M x = rhs with a Bunch-Kaufman LDL^T factorization (1x1 and 2x2
/// pivots), followed by one step of iterative refinement.
///
/// Reports kSingular when a pivot magnitude drops below
/// `tol_pivot * max|M_ij|`. For 2x2 pivots the magnitude is
/// |det E| / max|E_ij|.
SymSolveResult sym_solve(const SymMatrix &m, const Eigen::VectorXd &rhs,
                         double tol_pivot = kPivotTolerance);

/// Unpivoted LDL^T in natural index order that drops any index whose pivot
/// magnitude is below `tol * max_i |M_ii|` (or is exactly zero). Dropped
/// indices are listed in `skipped` and receive zeros in the solution; the
/// rest solve the principal subsystem. Reports kAllSkipped when nothing
/// survives.
SymSolveResult sym_solve_skipping(const SymMatrix &m,
                                  const Eigen::VectorXd &rhs, double tol);

}  // namespace rlqn
