//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/densecore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "rlqn/errors.hpp"

namespace rlqn {

namespace kernels {
  double dot(const Eigen::VectorXd &a, const Eigen::VectorXd &b,
             WorkCounter *wc) {
    if (wc != nullptr)
      wc->vector += static_cast<std::uint64_t>(a.size());
    return a.dot(b);
  }

  double squared_norm(const Eigen::VectorXd &a, WorkCounter *wc) {
    if (wc != nullptr)
      wc->vector += static_cast<std::uint64_t>(a.size());
    return a.squaredNorm();
  }

  void scale(double alpha, const Eigen::VectorXd &a, Eigen::VectorXd &out,
             WorkCounter *wc) {
    if (wc != nullptr)
      wc->vector += static_cast<std::uint64_t>(a.size());
    out = alpha * a;
  }
}  // namespace kernels

SymMatrix::SymMatrix(Index order): data_(Eigen::MatrixXd::Zero(order, order)) {
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd &m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("SymMatrix: matrix is not square");

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("SymMatrix: matrix is not symmetric");

  SymMatrix out;
  out.data_ = 0.5 * (m + m.transpose());
  return out;
}

namespace {
  struct BunchKaufman {
    Eigen::MatrixXd a;            // L below the pivots, D on the pivots
    std::vector<Index> perm;      // row i of P A P^T is row perm[i] of A
    std::vector<int> block;       // pivot block size starting at each index
    bool singular = false;
  };

  // Largest diagonal magnitude; a zero diagonal falls back to the largest
  // entry so that purely off-diagonal matrices keep a usable scale.
  double pivot_scale(const Eigen::MatrixXd &m) {
    if (m.size() == 0)
      return 0.0;
    const double diag = m.diagonal().cwiseAbs().maxCoeff();
    return diag > 0.0 ? diag : m.cwiseAbs().maxCoeff();
  }

  BunchKaufman bunch_kaufman(const Eigen::MatrixXd &input, double tol_pivot) {
    const Index n = input.rows();
    const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;

    BunchKaufman f;
    f.a = input;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), Index {0});
    f.block.assign(n, 0);

    const double threshold = tol_pivot * pivot_scale(input);
    if (!(threshold > 0.0) && n > 0) {
      f.singular = true;
      return f;
    }

    auto &a = f.a;
    auto swap_sym = [&](Index p, Index q) {
      if (p == q)
        return;
      a.row(p).swap(a.row(q));
      a.col(p).swap(a.col(q));
      std::swap(f.perm[p], f.perm[q]);
    };

    Index k = 0;
    while (k < n) {
      const double absakk = std::abs(a(k, k));
      Index imax = k;
      double colmax = 0.0;
      for (Index i = k + 1; i < n; ++i) {
        if (std::abs(a(i, k)) > colmax) {
          colmax = std::abs(a(i, k));
          imax = i;
        }
      }

      if (std::max(absakk, colmax) < threshold) {
        f.singular = true;
        return f;
      }

      int kstep = 1;
      Index kp = k;
      if (absakk < alpha * colmax) {
        double rowmax = 0.0;
        for (Index j = k; j < n; ++j) {
          if (j != imax)
            rowmax = std::max(rowmax, std::abs(a(imax, j)));
        }
        if (absakk * rowmax >= alpha * colmax * colmax) {
          kp = k;
        } else if (std::abs(a(imax, imax)) >= alpha * rowmax) {
          kp = imax;
        } else {
          kp = imax;
          kstep = 2;
        }
      }

      const Index kk = k + kstep - 1;
      swap_sym(kk, kp);

      if (kstep == 1) {
        const double d = a(k, k);
        if (std::abs(d) < threshold) {
          f.singular = true;
          return f;
        }
        for (Index j = k + 1; j < n; ++j) {
          const double ljd = a(j, k);
          for (Index i = j; i < n; ++i)
            a(i, j) -= a(i, k) * ljd / d;
        }
        for (Index i = k + 1; i < n; ++i)
          a(i, k) /= d;
        // keep the trailing block symmetric for later pivot searches
        for (Index j = k + 1; j < n; ++j)
          for (Index i = j + 1; i < n; ++i)
            a(j, i) = a(i, j);
        f.block[k] = 1;
      } else {
        const double e11 = a(k, k), e21 = a(k + 1, k), e22 = a(k + 1, k + 1);
        const double det = e11 * e22 - e21 * e21;
        const double emax = std::max({std::abs(e11), std::abs(e21),
                                      std::abs(e22)});
        if (std::abs(det) / emax < threshold) {
          f.singular = true;
          return f;
        }
        const double i11 = e22 / det, i21 = -e21 / det, i22 = e11 / det;

        for (Index j = k + 2; j < n; ++j) {
          const double wj0 = a(j, k), wj1 = a(j, k + 1);
          const double lj0 = wj0 * i11 + wj1 * i21;
          const double lj1 = wj0 * i21 + wj1 * i22;
          for (Index i = j; i < n; ++i)
            a(i, j) -= a(i, k) * lj0 + a(i, k + 1) * lj1;
        }
        for (Index i = k + 2; i < n; ++i) {
          const double wi0 = a(i, k), wi1 = a(i, k + 1);
          a(i, k) = wi0 * i11 + wi1 * i21;
          a(i, k + 1) = wi0 * i21 + wi1 * i22;
        }
        for (Index j = k + 2; j < n; ++j)
          for (Index i = j + 1; i < n; ++i)
            a(j, i) = a(i, j);
        f.block[k] = 2;
        f.block[k + 1] = 0;
      }
      k += kstep;
    }
    return f;
  }

  Eigen::VectorXd bk_solve(const BunchKaufman &f, const Eigen::VectorXd &rhs) {
    const Index n = f.a.rows();
    const auto &a = f.a;

    Eigen::VectorXd z(n);
    for (Index i = 0; i < n; ++i)
      z[i] = rhs[f.perm[i]];

    // L z = b; L is unit lower triangular apart from the 2x2 coupling,
    // whose off-diagonal lives in D.
    for (Index k = 0; k < n;) {
      const int bs = f.block[k];
      for (Index i = k + bs; i < n; ++i) {
        z[i] -= a(i, k) * z[k];
        if (bs == 2)
          z[i] -= a(i, k + 1) * z[k + 1];
      }
      k += bs;
    }

    for (Index k = 0; k < n;) {
      if (f.block[k] == 1) {
        z[k] /= a(k, k);
        k += 1;
      } else {
        const double e11 = a(k, k), e21 = a(k + 1, k), e22 = a(k + 1, k + 1);
        const double det = e11 * e22 - e21 * e21;
        const double z0 = z[k], z1 = z[k + 1];
        z[k] = (e22 * z0 - e21 * z1) / det;
        z[k + 1] = (e11 * z1 - e21 * z0) / det;
        k += 2;
      }
    }

    for (Index k = n - 1; k >= 0;) {
      // find the start of the block ending at k
      const Index start = (k > 0 && f.block[k] == 0) ? k - 1 : k;
      const int bs = f.block[start];
      for (Index i = start + bs; i < n; ++i) {
        z[start] -= a(i, start) * z[i];
        if (bs == 2)
          z[start + 1] -= a(i, start + 1) * z[i];
      }
      k = start - 1;
    }

    Eigen::VectorXd x(n);
    for (Index i = 0; i < n; ++i)
      x[f.perm[i]] = z[i];
    return x;
  }
}  // namespace

SymSolveResult sym_solve(const SymMatrix &m, const Eigen::VectorXd &rhs,
                         double tol_pivot) {
  if (m.order() != rhs.size())
    throw DimensionMismatch("sym_solve: order and rhs length differ");

  SymSolveResult out;
  if (m.order() == 0) {
    out.x = Eigen::VectorXd(0);
    return out;
  }

  // Symmetric diagonal equilibration: the pivot test then measures
  // singularity rather than disparate row scales.
  const Eigen::VectorXd diag = m.dense().diagonal().cwiseAbs();
  Eigen::VectorXd scale(m.order());
  for (Index i = 0; i < m.order(); ++i)
    scale[i] = diag[i] > 0.0 && std::isfinite(diag[i]) ? 1.0 / std::sqrt(diag[i])
                                                        : 1.0;
  const Eigen::MatrixXd scaled
      = scale.asDiagonal() * m.dense() * scale.asDiagonal();

  const BunchKaufman f = bunch_kaufman(scaled, tol_pivot);
  if (f.singular) {
    out.status = SolveStatus::kSingular;
    return out;
  }

  const Eigen::VectorXd b = scale.cwiseProduct(rhs);
  Eigen::VectorXd y = bk_solve(f, b);
  y += bk_solve(f, b - scaled * y);
  out.x = scale.cwiseProduct(y);

  if (!out.x.allFinite())
    out.status = SolveStatus::kSingular;
  return out;
}

SymSolveResult sym_solve_skipping(const SymMatrix &m,
                                  const Eigen::VectorXd &rhs, double tol) {
  if (m.order() != rhs.size())
    throw DimensionMismatch("sym_solve_skipping: order and rhs length differ");
  if (!(tol >= 0.0))
    throw std::invalid_argument("sym_solve_skipping: tol must be >= 0");

  const Index n = m.order();
  Eigen::MatrixXd a = m.dense();
  // threshold grows with the largest original diagonal entry seen so far,
  // floored at 1 so a lone vanishing pivot is still caught
  double running = 1.0;

  SymSolveResult out;
  std::vector<Index> active;
  active.reserve(n);

  for (Index k = 0; k < n; ++k) {
    running = std::max(running, std::abs(m.dense()(k, k)));
    const double d = a(k, k);
    if (d == 0.0 || std::abs(d) < tol * running || !std::isfinite(d)) {
      out.skipped.push_back(k);
      continue;
    }
    active.push_back(k);
    for (Index j = k + 1; j < n; ++j) {
      const double ljd = a(j, k);
      for (Index i = j; i < n; ++i)
        a(i, j) -= a(i, k) * ljd / d;
    }
    for (Index i = k + 1; i < n; ++i)
      a(i, k) /= d;
  }

  out.x = Eigen::VectorXd::Zero(n);
  if (active.empty()) {
    out.status = n == 0 ? SolveStatus::kOk : SolveStatus::kAllSkipped;
    return out;
  }

  // L restricted to the active indices is unit lower triangular.
  Eigen::VectorXd z = rhs;
  for (std::size_t p = 0; p < active.size(); ++p) {
    const Index k = active[p];
    for (std::size_t q = p + 1; q < active.size(); ++q)
      z[active[q]] -= a(active[q], k) * z[k];
  }
  for (const Index k: active)
    z[k] /= a(k, k);
  for (std::size_t p = active.size(); p-- > 0;) {
    const Index k = active[p];
    for (std::size_t q = p + 1; q < active.size(); ++q)
      z[k] -= a(active[q], k) * z[active[q]];
  }
  for (const Index k: active)
    out.x[k] = z[k];

  if (!out.x.allFinite())
    out.status = SolveStatus::kAllSkipped;
  return out;
}

}  // namespace rlqn
