//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include "rlqn/compact.hpp"
#include "rlqn/errors.hpp"
#include "rlqn/memory.hpp"
#include "support/generators.hpp"

using rlqn::Index;
using rlqn::MemoryState;
using rlqn::Scheme;

namespace {

double rel(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  return (a - b).norm() / std::max(1e-300, b.norm());
}

void check_coherent(const MemoryState &mem, const Eigen::VectorXd &g,
                    double tol = 1e-10) {
  const Eigen::MatrixXd S = mem.S_matrix(), Y = mem.Y_matrix();
  CHECK(rel(mem.gram_ss(), S.transpose() * S) <= tol);
  CHECK(rel(mem.gram_sy(), S.transpose() * Y) <= tol);
  CHECK(rel(mem.gram_yy(), Y.transpose() * Y) <= tol);
  CHECK(rel(mem.sg(), S.transpose() * g) <= tol);
  CHECK(rel(mem.yg(), Y.transpose() * g) <= tol);
}

}  // namespace

TEST_SUITE("memory") {

TEST_CASE("first pair sets the caches and gamma") {
  MemoryState mem(2, 3);
  CHECK(mem.gamma() == 1.0);
  CHECK(mem.push_pair(Eigen::Vector2d(1, 0), Eigen::Vector2d(2, 0),
                      Eigen::Vector2d(0, 1), nullptr, Scheme::kBfgs));
  CHECK(mem.gamma() == 2.0);
  CHECK(mem.gram_ss()(0, 0) == 1.0);
  CHECK(mem.gram_sy()(0, 0) == 2.0);
  CHECK(mem.gram_yy()(0, 0) == 4.0);
  CHECK(mem.sg()[0] == 0.0);
}

TEST_CASE("bfgs mode rejects negative curvature") {
  MemoryState mem(2, 3);
  CHECK_FALSE(mem.push_pair(Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0),
                            Eigen::Vector2d(0, 1), nullptr, Scheme::kBfgs));
  CHECK(mem.cols() == 0);
  CHECK(mem.gamma() == 1.0);
}

TEST_CASE("window slides on overflow") {
  MemoryState mem(2, 2);
  mem.register_gradient(Eigen::Vector2d(0, 0));
  Eigen::VectorXd g = Eigen::Vector2d(0, 0);
  const Eigen::Vector2d s[3] = {{1, 0}, {0, 1}, {1, 1}};
  const Eigen::Vector2d y[3] = {{1, 0}, {0, 2}, {2, 1}};
  for (int i = 0; i < 3; ++i) {
    g += y[i];
    REQUIRE(mem.push_pair(s[i], y[i], g, nullptr, Scheme::kBfgs));
  }
  Eigen::Matrix2d ss, sy, yy;
  ss << 1, 1, 1, 2;
  sy << 2, 1, 2, 3;
  yy << 4, 2, 2, 5;
  CHECK(mem.gram_ss() == Eigen::MatrixXd(ss));
  CHECK(mem.gram_sy() == Eigen::MatrixXd(sy));
  CHECK(mem.gram_yy() == Eigen::MatrixXd(yy));
  check_coherent(mem, g);
}

TEST_CASE("A blocks from caches") {
  MemoryState mem(2, 3);
  mem.register_gradient(Eigen::Vector2d(0, 0));
  mem.push_pair(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1),
                Eigen::Vector2d(1, 1), nullptr, Scheme::kSr1);
  // y^T s = 0 fails the cautious rule, so gamma stays 1
  CHECK(mem.gamma() == 1.0);
  const auto b = rlqn::assemble_A_blocks(mem, Scheme::kBfgs);
  CHECK(b.AtA.dense().isApprox(Eigen::Matrix2d::Identity()));
  CHECK(b.Atg.isApprox(Eigen::Vector2d(1, 1)));

  const auto r = rlqn::assemble_A_blocks(mem, Scheme::kSr1);
  CHECK(r.AtA(0, 0) == doctest::Approx(2.0));
  CHECK(r.Atg[0] == doctest::Approx(0.0));

  CHECK_THROWS_AS(rlqn::assemble_A_blocks(MemoryState(2, 3), Scheme::kBfgs),
                  rlqn::EmptyMemory);
}

TEST_CASE("A blocks equal explicit products") {
  gen::Rng rng(4);
  const auto st = gen::random_store(rng, 8, 3, 5, Scheme::kSr1);
  const Eigen::MatrixXd S = st.mem.S_matrix(), Y = st.mem.Y_matrix();
  const Eigen::MatrixXd A = Y - st.mem.gamma() * S;
  const auto b = rlqn::assemble_A_blocks(st.mem, Scheme::kSr1);
  CHECK(rel(b.AtA.dense(), A.transpose() * A) <= 1e-12);
  CHECK(rel(b.Atg, A.transpose() * st.g) <= 1e-12);

  Eigen::MatrixXd SY(8, 6);
  SY << S, Y;
  const auto c = rlqn::assemble_A_blocks(st.mem, Scheme::kPsb);
  CHECK(rel(c.AtA.dense(), SY.transpose() * SY) <= 1e-12);
  CHECK(rel(c.Atg, SY.transpose() * st.g) <= 1e-12);
}

TEST_CASE("caches stay coherent over random push sequences") {
  for (Scheme scheme: {Scheme::kBfgs, Scheme::kSr1, Scheme::kPsb}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      gen::Rng rng(seed);
      const Index m = 1 + static_cast<Index>(seed % 5);
      const auto st = gen::random_store(rng, 12, m, 3 * m + 1, scheme, 1.0);
      check_coherent(st.mem, st.g);
      CHECK(st.mem.gamma() > 0.0);
      for (Index i = 0; i < st.mem.cols(); ++i) {
        if (rlqn::requires_positive_curvature(scheme))
          CHECK(st.mem.s(i).dot(st.mem.y(i))
                >= 1e-8 * st.mem.s(i).squaredNorm());
      }
    }
  }
}

TEST_CASE("pushing with a step representation matches direct pushing") {
  for (Scheme scheme: {Scheme::kBfgs, Scheme::kBfgsSecant, Scheme::kSr1,
                       Scheme::kPsb}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      gen::Rng rng(seed + 50);
      const Index n = 10;
      auto st = gen::random_store(rng, n, 4, 3 + seed % 4, scheme);
      const Eigen::MatrixXd H = gen::random_spd(rng, n);
      for (int step = 0; step < 4; ++step) {
        const auto plan = rlqn::plan_regularized_step(
            st.mem, scheme, st.g.squaredNorm(), gen::uniform(rng, 0.01, 2.0));
        REQUIRE(plan.solvable);
        Eigen::VectorXd d;
        rlqn::form_direction(st.mem, plan, st.g, d);
        const Eigen::VectorXd y = H * d;
        const Eigen::VectorXd g_new = st.g + y;

        MemoryState direct = st.mem;
        direct.push_pair(d, y, g_new, nullptr, scheme);
        st.mem.push_pair(d, y, g_new, &plan.repr, scheme);
        st.g = g_new;
        CHECK(rel(st.mem.gram_ss(), direct.gram_ss()) <= 1e-8);
        CHECK(rel(st.mem.gram_sy(), direct.gram_sy()) <= 1e-8);
        CHECK(rel(st.mem.gram_yy(), direct.gram_yy()) <= 1e-8);
        check_coherent(st.mem, st.g, 1e-8);
      }
    }
  }
}

TEST_CASE("FIFO keeps the most recent pairs in order") {
  const Index m = 3, n = 4;
  MemoryState mem(n, m);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  mem.register_gradient(g);
  std::vector<Eigen::VectorXd> ss;
  for (int j = 0; j < m + 4; ++j) {
    Eigen::VectorXd s = Eigen::VectorXd::Constant(n, 1.0);
    s[j % n] += j + 1;
    const Eigen::VectorXd y = 2.0 * s;
    g += y;
    REQUIRE(mem.push_pair(s, y, g, nullptr, Scheme::kBfgs));
    ss.push_back(s);
  }
  REQUIRE(mem.cols() == m);
  for (Index i = 0; i < m; ++i)
    CHECK(mem.s(i) == ss[ss.size() - static_cast<std::size_t>(m - i)]);
}

TEST_CASE("push cost with a step representation") {
  const Index n = 300, m = 5;
  gen::Rng rng(8);
  auto st = gen::random_store(rng, n, m, m, Scheme::kBfgs);
  const auto plan = rlqn::plan_regularized_step(st.mem, Scheme::kBfgs,
                                                st.g.squaredNorm(), 0.5);
  Eigen::VectorXd d;
  rlqn::form_direction(st.mem, plan, st.g, d);
  const Eigen::VectorXd y = 1.5 * d;
  rlqn::WorkCounter wc;
  REQUIRE(st.mem.push_pair(d, y, st.g + y, &plan.repr, Scheme::kBfgs, &wc));
  CHECK(wc.matvec == static_cast<std::uint64_t>(2 * m * n));
  CHECK(wc.vector == static_cast<std::uint64_t>(3 * n));
}

TEST_CASE("sr1 and psb keep negative curvature pairs but freeze gamma") {
  for (Scheme scheme: {Scheme::kSr1, Scheme::kPsb}) {
    MemoryState mem(2, 3);
    mem.register_gradient(Eigen::Vector2d(0, 0));
    mem.push_pair(Eigen::Vector2d(1, 0), Eigen::Vector2d(3, 0),
                  Eigen::Vector2d(3, 0), nullptr, scheme);
    CHECK(mem.gamma() == 3.0);
    CHECK(mem.push_pair(Eigen::Vector2d(0, 1), Eigen::Vector2d(0, -1),
                        Eigen::Vector2d(3, -1), nullptr, scheme));
    CHECK(mem.cols() == 2);
    CHECK(mem.gamma() == 3.0);
  }
}

TEST_CASE("rejected pair leaves the store untouched except gradient caches") {
  gen::Rng rng(6);
  auto st = gen::random_store(rng, 6, 3, 3, Scheme::kBfgs);
  const MemoryState before = st.mem;
  const Eigen::VectorXd s = gen::normal_vector(rng, 6);
  // orthogonal y gives y^T s = 0, then tilt it to 1e-10 ||s||^2
  Eigen::VectorXd y = gen::normal_vector(rng, 6);
  y -= (y.dot(s) / s.squaredNorm()) * s;
  y += 1e-10 * s;
  const Eigen::VectorXd g_new = st.g + y;
  CHECK_FALSE(st.mem.push_pair(s, y, g_new, nullptr, Scheme::kBfgs));
  CHECK(st.mem.S_matrix() == before.S_matrix());
  CHECK(st.mem.Y_matrix() == before.Y_matrix());
  CHECK(st.mem.gram_ss() == before.gram_ss());
  CHECK(st.mem.gram_sy() == before.gram_sy());
  CHECK(st.mem.gram_yy() == before.gram_yy());
  CHECK(st.mem.gamma() == before.gamma());
  check_coherent(st.mem, g_new);
}

TEST_CASE("dimension and argument errors") {
  MemoryState mem(3, 2);
  CHECK_THROWS_AS(mem.push_pair(Eigen::Vector2d(1, 0), Eigen::Vector3d(1, 0, 0),
                                Eigen::Vector3d(0, 0, 0), nullptr, Scheme::kBfgs),
                  rlqn::DimensionMismatch);
  CHECK_THROWS_AS(mem.register_gradient(Eigen::Vector2d(1, 0)),
                  rlqn::DimensionMismatch);
  CHECK_THROWS_AS(MemoryState(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(mem.push_pair(Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 0, 0),
                                Eigen::Vector3d(0, 0, 0), nullptr, Scheme::kSr1),
                  std::invalid_argument);
}

}  // TEST_SUITE
