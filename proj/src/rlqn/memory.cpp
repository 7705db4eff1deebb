//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/memory.hpp"

#include <stdexcept>

#include "rlqn/errors.hpp"

namespace rlqn {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
  case Scheme::kBfgs:
    return "bfgs";
  case Scheme::kBfgsSecant:
    return "bfgs-secant";
  case Scheme::kSr1:
    return "sr1";
  case Scheme::kPsb:
    return "psb";
  }
  return "unknown";
}

MemoryState::MemoryState(Index n, Index m_max, double eps_cautious)
    : n_(n), m_max_(m_max), eps_(eps_cautious), S_(n, m_max), Y_(n, m_max),
      ss_(0, 0), sy_(0, 0), yy_(0, 0), sg_(0), yg_(0), sr1_(n, m_max) {
  if (n <= 0 || m_max <= 0)
    throw std::invalid_argument("MemoryState: n and m_max must be positive");
  if (!(eps_cautious >= 0.0))
    throw std::invalid_argument("MemoryState: eps must be >= 0");
}

Eigen::Ref<const Eigen::VectorXd> MemoryState::s(Index i) const {
  return S_.col(phys(i));
}

Eigen::Ref<const Eigen::VectorXd> MemoryState::y(Index i) const {
  return Y_.col(phys(i));
}

Eigen::MatrixXd MemoryState::gram() const {
  Eigen::MatrixXd g(2 * cols_, 2 * cols_);
  g << ss_, sy_, sy_.transpose(), yy_;
  return g;
}

Eigen::MatrixXd MemoryState::S_matrix() const {
  Eigen::MatrixXd out(n_, cols_);
  for (Index i = 0; i < cols_; ++i)
    out.col(i) = s(i);
  return out;
}

Eigen::MatrixXd MemoryState::Y_matrix() const {
  Eigen::MatrixXd out(n_, cols_);
  for (Index i = 0; i < cols_; ++i)
    out.col(i) = y(i);
  return out;
}

void MemoryState::register_gradient(const Eigen::VectorXd &g,
                                    WorkCounter *wc) {
  if (g.size() != n_)
    throw DimensionMismatch("register_gradient: wrong length");
  const Eigen::VectorXd w = basis_transpose_times(g, wc);
  sg_ = w.head(cols_);
  yg_ = w.tail(cols_);
}

void MemoryState::multiply_basis(const Eigen::VectorXd &c, Eigen::VectorXd &out,
                                 WorkCounter *wc) const {
  if (c.size() != 2 * cols_)
    throw DimensionMismatch("multiply_basis: coefficient length");
  out.setZero(n_);
  for (Index i = 0; i < cols_; ++i) {
    out.noalias() += c[i] * S_.col(phys(i));
    out.noalias() += c[cols_ + i] * Y_.col(phys(i));
  }
  if (wc != nullptr)
    wc->matvec += static_cast<std::uint64_t>(2 * cols_ * n_);
}

Eigen::VectorXd MemoryState::basis_transpose_times(const Eigen::VectorXd &v,
                                                   WorkCounter *wc) const {
  if (v.size() != n_)
    throw DimensionMismatch("basis_transpose_times: wrong length");
  Eigen::VectorXd out(2 * cols_);
  for (Index i = 0; i < cols_; ++i) {
    out[i] = S_.col(phys(i)).dot(v);
    out[cols_ + i] = Y_.col(phys(i)).dot(v);
  }
  if (wc != nullptr)
    wc->matvec += static_cast<std::uint64_t>(2 * cols_ * n_);
  return out;
}

void MemoryState::rebuild_sr1_basis(WorkCounter *wc) const {
  for (Index i = 0; i < cols_; ++i) {
    const Index c = phys(i);
    sr1_.col(c) = Y_.col(c) - gamma_ * S_.col(c);
  }
  sr1_gamma_ = gamma_;
  sr1_dirty_ = false;
  if (wc != nullptr)
    wc->matvec += static_cast<std::uint64_t>(cols_ * n_);
}

void MemoryState::multiply_sr1_basis(const Eigen::VectorXd &p,
                                     Eigen::VectorXd &out,
                                     WorkCounter *wc) const {
  if (p.size() != cols_)
    throw DimensionMismatch("multiply_sr1_basis: coefficient length");
  if (sr1_dirty_ || sr1_gamma_ != gamma_)
    rebuild_sr1_basis(wc);
  out.setZero(n_);
  for (Index i = 0; i < cols_; ++i) {
    if (p[i] != 0.0)
      out.noalias() += p[i] * sr1_.col(phys(i));
  }
  if (wc != nullptr)
    wc->matvec += static_cast<std::uint64_t>(cols_ * n_);
}

bool MemoryState::push_pair(const Eigen::VectorXd &s, const Eigen::VectorXd &y,
                            const Eigen::VectorXd &g_new,
                            const StepRepresentation *repr, Scheme scheme,
                            WorkCounter *wc) {
  if (s.size() != n_ || y.size() != n_ || g_new.size() != n_)
    throw DimensionMismatch("push_pair: vector lengths differ from n");

  const double a1 = kernels::squared_norm(s, wc);
  const double a2 = kernels::dot(s, y, wc);
  const double a3 = kernels::squared_norm(y, wc);
  if (!(a1 > 0.0))
    throw std::invalid_argument("push_pair: s must be nonzero");

  const bool cautious_ok = a2 >= eps_ * a1;
  if (!cautious_ok && requires_positive_curvature(scheme)) {
    register_gradient(g_new, wc);
    return false;
  }

  // v = [S^T s; Y^T s] over the columns present before the push
  const Index old_cols = cols_;
  Eigen::VectorXd v(2 * old_cols);
  if (old_cols > 0) {
    if (repr != nullptr) {
      if (repr->coeffs.size() != 2 * old_cols)
        throw DimensionMismatch("push_pair: step representation length");
      Eigen::VectorXd atg(2 * old_cols);
      atg << sg_, yg_;
      v = -atg / repr->gamma_hat + gram() * repr->coeffs;
    } else {
      v = basis_transpose_times(s, wc);
    }
  }

  const bool drop = old_cols == m_max_;
  const Index off = drop ? 1 : 0;
  const Index kept = old_cols - off;

  Index slot;
  if (drop) {
    slot = head_;
    head_ = (head_ + 1) % m_max_;
  } else {
    slot = phys(old_cols);
  }
  S_.col(slot) = s;
  Y_.col(slot) = y;
  cols_ = kept + 1;

  const Eigen::VectorXd w = basis_transpose_times(g_new, wc);

  Eigen::MatrixXd ss(cols_, cols_), sy(cols_, cols_), yy(cols_, cols_);
  ss.topLeftCorner(kept, kept) = ss_.bottomRightCorner(kept, kept);
  sy.topLeftCorner(kept, kept) = sy_.bottomRightCorner(kept, kept);
  yy.topLeftCorner(kept, kept) = yy_.bottomRightCorner(kept, kept);
  for (Index i = 0; i < kept; ++i) {
    // s_i^T y = s_i^T g_new - s_i^T g_old, likewise for y_i
    ss(i, kept) = ss(kept, i) = v[off + i];
    sy(i, kept) = w[i] - sg_[off + i];
    sy(kept, i) = v[old_cols + off + i];
    yy(i, kept) = yy(kept, i) = w[cols_ + i] - yg_[off + i];
  }
  ss(kept, kept) = a1;
  sy(kept, kept) = a2;
  yy(kept, kept) = a3;

  ss_ = std::move(ss);
  sy_ = std::move(sy);
  yy_ = std::move(yy);
  sg_ = w.head(cols_);
  yg_ = w.tail(cols_);

  const double old_gamma = gamma_;
  if (cautious_ok)
    gamma_ = a3 / a2;

  if (scheme == Scheme::kSr1) {
    if (!sr1_dirty_ && gamma_ == old_gamma && sr1_gamma_ == gamma_) {
      sr1_.col(slot) = y - gamma_ * s;
      if (wc != nullptr)
        wc->matvec += static_cast<std::uint64_t>(n_);
    } else {
      rebuild_sr1_basis(wc);
    }
  } else {
    sr1_dirty_ = true;
  }
  return true;
}

ABlocks assemble_A_blocks(const MemoryState &mem, Scheme scheme) {
  if (mem.empty())
    throw EmptyMemory();

  ABlocks out;
  if (scheme == Scheme::kSr1) {
    const double gamma = mem.gamma();
    const Eigen::MatrixXd &sy = mem.gram_sy();
    const Eigen::MatrixXd ata = mem.gram_yy() - gamma * (sy + sy.transpose())
                                + gamma * gamma * mem.gram_ss();
    out.AtA = SymMatrix::from_dense(0.5 * (ata + ata.transpose()));
    out.Atg = mem.yg() - gamma * mem.sg();
  } else {
    const Eigen::MatrixXd g = mem.gram();
    out.AtA = SymMatrix::from_dense(g);
    out.Atg.resize(2 * mem.cols());
    out.Atg << mem.sg(), mem.yg();
  }
  return out;
}

}  // namespace rlqn
