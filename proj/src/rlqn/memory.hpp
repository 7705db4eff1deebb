//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "rlqn/densecore.hpp"

namespace rlqn {

enum class Scheme { kBfgs, kBfgsSecant, kSr1, kPsb };

std::string_view scheme_name(Scheme scheme);

/// BFGS-type schemes reject pairs that fail the cautious rule; SR1 and PSB
/// store them anyway.
inline bool requires_positive_curvature(Scheme scheme) {
  return scheme == Scheme::kBfgs || scheme == Scheme::kBfgsSecant;
}

/// A step written as s = -g / gamma_hat + [S Y] * coeffs, where g is the
/// gradient the memory caches were registered against. coeffs has length
/// 2 * cols (S part first).
struct StepRepresentation {
  double gamma_hat = 1.0;
  Eigen::VectorXd coeffs;
};

/// Rolling store of the most recent pairs (s_i, y_i), oldest first.
///
/// Keeps S^T S, S^T Y, Y^T Y and S^T g, Y^T g for the last registered
/// gradient g. Column storage is circular so dropping the oldest pair moves
/// no n-length data.
class MemoryState {
public:
  MemoryState(Index n, Index m_max, double eps_cautious = 1e-8);

  Index dimension() const { return n_; }
  Index capacity() const { return m_max_; }
  Index cols() const { return cols_; }
  bool empty() const { return cols_ == 0; }
  double gamma() const { return gamma_; }
  double eps_cautious() const { return eps_; }

  Eigen::Ref<const Eigen::VectorXd> s(Index i) const;
  Eigen::Ref<const Eigen::VectorXd> y(Index i) const;

  const Eigen::MatrixXd &gram_ss() const { return ss_; }
  // gram_sy()(i, j) = s_i^T y_j
  const Eigen::MatrixXd &gram_sy() const { return sy_; }
  const Eigen::MatrixXd &gram_yy() const { return yy_; }
  const Eigen::VectorXd &sg() const { return sg_; }
  const Eigen::VectorXd &yg() const { return yg_; }

  /// [[S^T S, S^T Y], [Y^T S, Y^T Y]]
  Eigen::MatrixXd gram() const;

  /// Dense copies of the stored columns, oldest first (tests and oracles).
  Eigen::MatrixXd S_matrix() const;
  Eigen::MatrixXd Y_matrix() const;

  /// Offers the pair produced by a step from the point whose gradient is
  /// currently registered to a point with gradient g_new.
  ///
  /// When `repr` is given, S^T s and Y^T s come from the caches instead of
  /// n-length products. Returns false when the pair was rejected by the
  /// cautious rule; the gradient caches are refreshed against g_new either
  /// way.
  bool push_pair(const Eigen::VectorXd &s, const Eigen::VectorXd &y,
                 const Eigen::VectorXd &g_new, const StepRepresentation *repr,
                 Scheme scheme, WorkCounter *wc = nullptr);

  /// Recomputes S^T g and Y^T g directly.
  void register_gradient(const Eigen::VectorXd &g, WorkCounter *wc = nullptr);

  /// out = [S Y] * c, c of length 2 * cols.
  void multiply_basis(const Eigen::VectorXd &c, Eigen::VectorXd &out,
                      WorkCounter *wc = nullptr) const;

  /// Returns [S^T v; Y^T v].
  Eigen::VectorXd basis_transpose_times(const Eigen::VectorXd &v,
                                        WorkCounter *wc = nullptr) const;

  /// out = (Y - gamma S) * p, using an explicitly stored copy of the SR1
  /// basis. SR1-mode pushes keep that copy current; otherwise it is rebuilt
  /// here on first use.
  void multiply_sr1_basis(const Eigen::VectorXd &p, Eigen::VectorXd &out,
                          WorkCounter *wc = nullptr) const;

private:
  Index phys(Index i) const { return (head_ + i) % m_max_; }

  Index n_;
  Index m_max_;
  double eps_;

  Eigen::MatrixXd S_;
  Eigen::MatrixXd Y_;
  Index head_ = 0;
  Index cols_ = 0;

  Eigen::MatrixXd ss_, sy_, yy_;
  Eigen::VectorXd sg_, yg_;
  double gamma_ = 1.0;

  void rebuild_sr1_basis(WorkCounter *wc) const;

  // physical layout as S_; valid for sr1_gamma_ when not dirty
  mutable Eigen::MatrixXd sr1_;
  mutable double sr1_gamma_ = 0.0;
  mutable bool sr1_dirty_ = true;
};

/// The low-rank factor data of a compact representation, from caches only.
struct ABlocks {
  SymMatrix AtA;
  Eigen::VectorXd Atg;
};

/// A = [S Y] for BFGS-type and PSB schemes, A = Y - gamma S for SR1.
/// Throws EmptyMemory when the store holds no pairs.
ABlocks assemble_A_blocks(const MemoryState &mem, Scheme scheme);

}  // namespace rlqn
