//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

// Hand-rolled random generators for property tests.
#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>
#include <Eigen/QR>

#include "rlqn/memory.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline Eigen::VectorXd normal_vector(Rng &rng, Eigen::Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = nd(rng);
  return v;
}

inline Eigen::MatrixXd normal_matrix(Rng &rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i)
      m(i, j) = nd(rng);
  return m;
}

inline double uniform(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::MatrixXd random_orthogonal(Rng &rng, Eigen::Index n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(normal_matrix(rng, n, n));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

/// Symmetric matrix with eigenvalues drawn from [lo, hi]; when `indefinite`
/// roughly a third of them are negated.
inline Eigen::MatrixXd random_symmetric(Rng &rng, Eigen::Index n, double lo,
                                        double hi, bool indefinite) {
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  Eigen::VectorXd ev(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ev[i] = uniform(rng, lo, hi);
    if (indefinite && i % 3 == 1)
      ev[i] = -ev[i];
  }
  const Eigen::MatrixXd m = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd random_spd(Rng &rng, Eigen::Index n, double lo = 0.5,
                                  double hi = 5.0) {
  return random_symmetric(rng, n, lo, hi, false);
}

struct StoreHistory {
  rlqn::MemoryState mem;
  Eigen::VectorXd g;  // last registered gradient
};

/// Feeds `pushes` pairs y = H s + noise * e through push_pair. Gradients
/// follow the pairs (g_new = g + y) as push_pair requires. H is SPD for
/// BFGS-type schemes and indefinite otherwise.
inline StoreHistory random_store(Rng &rng, Eigen::Index n, Eigen::Index m,
                                 Eigen::Index pushes, rlqn::Scheme scheme,
                                 double noise = 0.1) {
  const bool indefinite = !rlqn::requires_positive_curvature(scheme);
  const Eigen::MatrixXd h = random_symmetric(rng, n, 0.5, 5.0, indefinite);
  StoreHistory out {rlqn::MemoryState(n, m), normal_vector(rng, n)};
  out.mem.register_gradient(out.g);
  for (Eigen::Index k = 0; k < pushes; ++k) {
    const Eigen::VectorXd s = normal_vector(rng, n);
    const Eigen::VectorXd y = h * s + noise * normal_vector(rng, n);
    out.g += y;
    out.mem.push_pair(s, y, out.g, nullptr, scheme);
  }
  return out;
}

}  // namespace gen
