//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>

#include <doctest.h>

#include "rlqn/driver.hpp"
#include "rlqn/errors.hpp"

using rlqn::Index;
using rlqn::RunStatus;
using rlqn::SolverConfig;
using rlqn::StepClass;

namespace {

// Smooth quadratic whose f-only evaluations report a huge value, so every
// trial point of the regularized loop looks like an ascent step.
class RejectingQuadratic final: public rlqn::Problem {
public:
  explicit RejectingQuadratic(Index n): Problem("rejecting", n) { }
  Eigen::VectorXd initial_point() const override {
    return Eigen::VectorXd::Ones(dimension());
  }

protected:
  double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
    if (g == nullptr)
      return 1e300;
    *g = x;
    return 0.5 * x.squaredNorm();
  }
};

rlqn::RunOptions traced() {
  rlqn::RunOptions o;
  o.keep_trace = true;
  return o;
}

std::deque<double> hist(std::initializer_list<double> v) { return {v}; }

const rlqn::AlgoSpec &reg(rlqn::Scheme s) {
  for (const auto &a: rlqn::algorithms())
    if (a.regularized && a.scheme == s)
      return a;
  throw std::logic_error("no such scheme");
}

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("classification examples") {
  const SolverConfig cfg;
  auto u = rlqn::classify_and_update_mu(true, 1.5, 1.5, 1.0, 2.0, 1.0, cfg);
  CHECK(u.cls == StepClass::kHighlySuccessful);
  CHECK(u.mu_next == 0.5);
  CHECK(u.rho == 1.0);

  u = rlqn::classify_and_update_mu(true, 1.0, 0.5, 1.0, 1.0, 1.0, cfg);
  CHECK(u.cls == StepClass::kSuccessful);
  CHECK(u.mu_next == 1.0);

  u = rlqn::classify_and_update_mu(true, 1e-9, 1.0, 1.0, 1.0, 1.0, cfg);
  CHECK(u.cls == StepClass::kUnsuccessful);
  CHECK(u.mu_next == 4.0);
  CHECK(std::isnan(u.rho));

  u = rlqn::classify_and_update_mu(false, 1.0, 1.0, 1.0, 1.0, 2.0, cfg);
  CHECK(u.cls == StepClass::kUnsuccessful);
  CHECK(u.mu_next == 8.0);

  // the ratio band edges
  CHECK(rlqn::classify_and_update_mu(true, 1.0, 1e-4, 1, 1, 1, cfg).cls
        == StepClass::kUnsuccessful);
  CHECK(rlqn::classify_and_update_mu(true, 1.0, 0.9, 1, 1, 1, cfg).cls
        == StepClass::kSuccessful);
  CHECK(rlqn::classify_and_update_mu(true, 1.0, std::nan(""), 1, 1, 1, cfg).cls
        == StepClass::kUnsuccessful);
  CHECK(rlqn::classify_and_update_mu(true, 1.0, 5.0, 1, 1, 1e-4, cfg).mu_next
        == 1e-4);
}

TEST_CASE("classification properties on random inputs") {
  const SolverConfig cfg;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double pred = std::pow(10.0, u(rng)) * (i % 7 == 0 ? -1 : 1);
    const double ared = std::pow(10.0, u(rng)) * (i % 3 == 0 ? -1 : 1);
    const double dn = std::pow(10.0, u(rng)), gn = std::pow(10.0, u(rng));
    const double mu = std::pow(10.0, u(rng) + 1.0);
    const auto r = rlqn::classify_and_update_mu(true, pred, ared, dn, gn, mu, cfg);
    if (r.cls != StepClass::kUnsuccessful) {
      CHECK(pred > cfg.p_min * gn * dn);
      CHECK(ared > cfg.c1 * pred);
    }
    if (r.cls == StepClass::kUnsuccessful)
      CHECK(r.mu_next == cfg.sigma2 * mu);
    if (r.cls == StepClass::kHighlySuccessful) {
      CHECK(r.mu_next <= mu);
      CHECK(r.mu_next >= cfg.mu_min);
    }
  }
}

TEST_CASE("nonmonotone reference examples") {
  CHECK(rlqn::nonmonotone_ref(hist({9, 3}), 50, 0) == 3);
  CHECK(rlqn::nonmonotone_ref(hist({5, 4, 3, 2}), 3, 8) == 2);
  CHECK(rlqn::nonmonotone_ref(hist({2, 7, 4}), 10, 3) == 7);
  CHECK_THROWS_AS(rlqn::nonmonotone_ref({}, 0, 0), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(SolverConfig {}.validate());
  SolverConfig c;
  c.c1 = 0.95;
  CHECK_THROWS_AS(c.validate(), rlqn::ConfigError);
  c = {};
  c.sigma2 = 0.9;
  CHECK_THROWS_AS(c.validate(), rlqn::ConfigError);
  c = {};
  c.mu0 = 1e-6;
  CHECK_THROWS_AS(c.validate(), rlqn::ConfigError);
  c = {};
  c.p_min = 1.0;
  CHECK_THROWS_AS(c.validate(), rlqn::ConfigError);
  c = {};
  c.m = 0;
  CHECK_THROWS_AS(c.validate(), rlqn::ConfigError);
  CHECK(rlqn::parse_status("MuOverflow") == RunStatus::kMuOverflow);
  CHECK_THROWS_AS(rlqn::parse_status("Nope"), std::invalid_argument);
}

TEST_CASE("regularized bfgs solves a small quadratic") {
  auto p = rlqn::make_problem("quadratic", 10, 10.0);
  const auto r = rlqn::run_regularized(*p, SolverConfig {});
  CHECK(r.status == RunStatus::kConverged);
  CHECK(r.final_g_inf < 1e-4);
  CHECK(r.fevals <= 200);
}

TEST_CASE("exact curvature keeps every step highly successful") {
  auto p = rlqn::make_problem("quadratic", 20, 1.0);  // f = ||x||^2 / 2
  SolverConfig cfg;
  cfg.tol_g = 1e-8;
  const auto r = rlqn::run_regularized(*p, cfg, traced());
  CHECK(r.status == RunStatus::kConverged);
  REQUIRE_FALSE(r.trace.empty());
  double mu = cfg.mu0;
  for (const auto &rec: r.trace) {
    CHECK(rec.cls == StepClass::kHighlySuccessful);
    CHECK(std::abs(rec.rho - 1.0) <= 1e-6);
    CHECK(rec.mu == mu);
    mu = std::max(0.5 * mu, cfg.mu_min);
  }
}

TEST_CASE("forced rejections end in mu overflow after 25 steps") {
  RejectingQuadratic p(5);
  SolverConfig cfg;
  const auto r = rlqn::run_regularized(p, cfg, traced());
  CHECK(r.status == RunStatus::kMuOverflow);
  CHECK(r.iters == 25);
  CHECK(r.accepted_steps == 0);
  CHECK(r.final_mu == std::pow(4.0, 25));
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].cls == StepClass::kUnsuccessful);
    CHECK(r.trace[i].mu == std::pow(4.0, static_cast<double>(i)));
  }
}

TEST_CASE("run invariants across the suite") {
  for (const auto &name: rlqn::problem_names()) {
    for (rlqn::Scheme scheme: {rlqn::Scheme::kBfgs, rlqn::Scheme::kBfgsSecant,
                               rlqn::Scheme::kSr1, rlqn::Scheme::kPsb}) {
      for (int M: {0, 8}) {
        auto p = rlqn::make_problem(name, 40);
        SolverConfig cfg;
        cfg.nonmonotone_M = M;
        cfg.max_iters = 3000;
        const auto r = rlqn::run_algorithm(reg(scheme), *p, cfg,
                                           traced());
        INFO(name, " ", rlqn::scheme_name(scheme), " M=", M, " status ",
             rlqn::status_name(r.status));

        CHECK(r.fevals == p->feval_count());
        CHECK(r.gevals == p->geval_count());
        CHECK(r.accepted_steps <= r.iters);
        CHECK(r.accepted_steps >= 1);
        if (r.status == RunStatus::kConverged)
          CHECK(r.final_g_inf < cfg.tol_g);

        std::int64_t evaluated = 0;
        double last_accepted_f = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
          const auto &rec = r.trace[i];
          evaluated += rec.evaluated ? 1 : 0;
          CHECK(rec.mu >= cfg.mu_min);
          CHECK(rec.mu <= cfg.mu_max);
          if (i + 1 < r.trace.size()) {
            const double next = r.trace[i + 1].mu;
            if (rec.cls == StepClass::kUnsuccessful)
              CHECK(next >= rec.mu);
            if (rec.cls == StepClass::kHighlySuccessful)
              CHECK(next <= rec.mu);
            if (rec.cls == StepClass::kUnsuccessful)
              CHECK(r.trace[i + 1].f == rec.f);
          }
          if (rec.cls != StepClass::kUnsuccessful) {
            CHECK(rec.ared > cfg.c1 * rec.pred);
            CHECK(rec.pred > 0.0);
            if (M == 0) {
              CHECK(rec.f < last_accepted_f);
              last_accepted_f = rec.f;
            }
          }
        }
        CHECK(r.fevals == 1 + r.seed_fevals + evaluated);
        CHECK(r.iters == static_cast<std::int64_t>(r.trace.size()));
      }
    }
  }
}

TEST_CASE("accepted steps pass the sufficient decrease screen") {
  auto p = rlqn::make_problem("chainrosenbrock", 30);
  SolverConfig cfg;
  std::vector<double> d_norms;
  auto opts = traced();
  opts.direction_hook = [&](Eigen::VectorXd &d) { d_norms.push_back(d.norm()); };
  const auto r = rlqn::run_regularized(*p, cfg, opts);
  std::size_t j = 0;
  for (const auto &rec: r.trace) {
    if (!rec.evaluated)
      continue;
    REQUIRE(j < d_norms.size());
    // ||g|| >= ||g||_inf, so this is implied by the Euclidean screen
    CHECK(rec.pred > cfg.p_min * rec.g_inf * d_norms[j]);
    ++j;
  }
}

TEST_CASE("nonmonotone window matches monotone runs that end early") {
  // fewer iterations than M: the reference value is always the current f
  for (const char *name: {"quadratic", "raydan1"}) {
    auto a = rlqn::make_problem(name, 10);
    auto b = rlqn::make_problem(name, 10);
    SolverConfig mono, non;
    non.nonmonotone_M = 50;
    mono.max_iters = non.max_iters = 49;
    const auto ra = rlqn::run_regularized(*a, mono, traced());
    const auto rb = rlqn::run_regularized(*b, non, traced());
    CHECK(ra.iters == rb.iters);
    CHECK(ra.fevals == rb.fevals);
    CHECK(ra.final_f == rb.final_f);
  }
}

TEST_CASE("baseline line-search drivers") {
  auto q = rlqn::make_problem("quadratic", 10);
  const auto w = rlqn::run_linesearch_lbfgs(*q, SolverConfig {},
                                            rlqn::SearchKind::kWolfe);
  CHECK(w.status == RunStatus::kConverged);
  CHECK(w.fevals <= 150);
  CHECK(w.fevals == q->feval_count());

  auto ros = rlqn::make_problem("extrosenbrock", 100);
  const auto a = rlqn::run_linesearch_lbfgs(*ros, SolverConfig {},
                                            rlqn::SearchKind::kArmijo);
  CHECK(a.status == RunStatus::kConverged);
  CHECK(a.fevals <= 100000);
  CHECK(a.accepted_steps <= a.iters);

  auto ascent = rlqn::make_problem("quadratic", 10);
  rlqn::RunOptions flip;
  flip.direction_hook = [](Eigen::VectorXd &d) { d = -d; };
  const auto bad = rlqn::run_linesearch_lbfgs(*ascent, SolverConfig {},
                                              rlqn::SearchKind::kArmijo, flip);
  CHECK(bad.status == RunStatus::kLineSearchFail);
}

TEST_CASE("algorithm registry") {
  CHECK(rlqn::algorithms().size() == 6);
  CHECK(rlqn::find_algorithm("regLSR1").scheme == rlqn::Scheme::kSr1);
  CHECK_FALSE(rlqn::find_algorithm("wolfeLBFGS").regularized);
  CHECK_THROWS_AS(rlqn::find_algorithm("newton"), rlqn::UnknownAlgo);
}

TEST_CASE("a stationary start converges without iterating") {
  class AtSolution final: public rlqn::Problem {
  public:
    AtSolution(): Problem("at-solution", 3) { }
    Eigen::VectorXd initial_point() const override {
      return Eigen::VectorXd::Zero(3);
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      if (g != nullptr)
        *g = x;
      return 0.5 * x.squaredNorm();
    }
  } at;
  const auto r = rlqn::run_regularized(at, SolverConfig {});
  CHECK(r.status == RunStatus::kConverged);
  CHECK(r.iters == 0);
  CHECK(r.fevals == 1);
  CHECK(r.accepted_ratio() == 1.0);
}

}  // TEST_SUITE
