//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include "rlqn/errors.hpp"
#include "rlqn/problems.hpp"
#include "support/generators.hpp"

using rlqn::make_problem;

TEST_SUITE("problems") {

TEST_CASE("extended rosenbrock values") {
  auto p = make_problem("extrosenbrock", 4);
  Eigen::VectorXd g;
  CHECK(p->value_and_gradient(Eigen::VectorXd::Ones(4), g) == 0.0);
  CHECK(g.isZero());

  auto q = make_problem("extrosenbrock", 2);
  const double f = q->value_and_gradient(q->initial_point(), g);
  // t1 = 1 - 1.44 = -0.44, t2 = 2.2
  CHECK(f == doctest::Approx(100 * 0.44 * 0.44 + 2.2 * 2.2));
  CHECK(f == doctest::Approx(24.2));
  CHECK(g[0] == doctest::Approx(-400 * -1.2 * -0.44 - 2 * 2.2));
  CHECK(g[0] == doctest::Approx(-215.6));
  CHECK(g[1] == doctest::Approx(-88.0));
}

TEST_CASE("convex quadratic values") {
  auto p = make_problem("quadratic", 3);
  Eigen::VectorXd g;
  CHECK(p->value_and_gradient(Eigen::Vector3d(1, 1, 1), g) == doctest::Approx(3.0));
  CHECK(g.isApprox(Eigen::Vector3d(1, 2, 3)));

  auto c = make_problem("quadratic", 3, 5.0);
  c->gradient(Eigen::Vector3d(1, 1, 1), g);
  CHECK(g.isApprox(Eigen::Vector3d(1, 3, 5)));
  CHECK(rlqn::grad_check(*make_problem("quadratic", 2),
                         Eigen::Vector2d(1, 1), 1e-6)
        <= 1e-6);
}

TEST_CASE("counters track each kind of evaluation") {
  auto p = make_problem("broydentri", 10);
  const Eigen::VectorXd x = p->initial_point();
  Eigen::VectorXd g;
  p->value(x);
  CHECK(p->feval_count() == 1);
  CHECK(p->geval_count() == 0);
  p->gradient(x, g);
  CHECK(p->feval_count() == 1);
  CHECK(p->geval_count() == 1);
  p->value_and_gradient(x, g);
  CHECK(p->feval_count() == 2);
  CHECK(p->geval_count() == 2);
  p->reset_counters();
  CHECK(p->feval_count() == 0);
}

TEST_CASE("evaluation is deterministic") {
  gen::Rng rng(2);
  for (const auto &name: rlqn::problem_names()) {
    auto p = make_problem(name, 12);
    const Eigen::VectorXd x = p->initial_point() + 0.1 * gen::normal_vector(rng, 12);
    Eigen::VectorXd g1, g2;
    const double f1 = p->value_and_gradient(x, g1);
    const double f2 = p->value_and_gradient(x, g2);
    CHECK(f1 == f2);
    CHECK(g1 == g2);
    CHECK(p->value(x) == f1);
  }
}

TEST_CASE("every suite problem passes the gradient check") {
  gen::Rng rng(11);
  for (const auto &name: rlqn::problem_names()) {
    auto p = make_problem(name, 20);
    INFO(name);
    CHECK(p->initial_point().size() == 20);
    CHECK(rlqn::grad_check(*p, p->initial_point(), 1e-6) <= 1e-5);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd x(20);
      for (Eigen::Index i = 0; i < 20; ++i)
        x[i] = gen::uniform(rng, -2.0, 2.0);
      CHECK(rlqn::grad_check(*p, x, 1e-6) <= 1e-5);
    }
  }
}

TEST_CASE("suite problems are bounded below on sampled points") {
  gen::Rng rng(13);
  for (const auto &name: rlqn::problem_names()) {
    auto p = make_problem(name, 16);
    for (int k = 0; k < 200; ++k) {
      Eigen::VectorXd x(16);
      for (Eigen::Index i = 0; i < 16; ++i)
        x[i] = gen::uniform(rng, -5.0, 5.0);
      // every objective is a sum of nonnegative terms
      CHECK(p->value(x) >= 0.0);
    }
  }
}

TEST_CASE("non-finite results are reported and still counted") {
  auto p = make_problem("raydan1", 4);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  x[3] = 1e4;  // exp overflows
  CHECK_THROWS_AS(p->value(x), rlqn::NonFiniteValue);
  CHECK(p->feval_count() == 1);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(make_problem("nosuch", 10), rlqn::UnknownProblem);
  CHECK_THROWS_AS(make_problem("extrosenbrock", 3), rlqn::DimensionMismatch);
  CHECK_THROWS_AS(make_problem("extpowell", 6), rlqn::DimensionMismatch);
  auto p = make_problem("trigonometric", 5);
  CHECK_THROWS_AS(p->value(Eigen::VectorXd::Zero(4)), rlqn::DimensionMismatch);
}

}  // TEST_SUITE
