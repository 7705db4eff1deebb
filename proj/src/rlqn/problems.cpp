//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/problems.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rlqn/errors.hpp"

namespace rlqn {

Problem::Problem(std::string name, Index n): name_(std::move(name)), n_(n) {
  if (n <= 0)
    throw DimensionMismatch("problem dimension must be positive");
}

void Problem::check_point(const Eigen::VectorXd &x) const {
  if (x.size() != n_)
    throw DimensionMismatch(name_ + ": point has wrong length");
}

double Problem::value(const Eigen::VectorXd &x) {
  check_point(x);
  ++fevals_;
  const double f = compute(x, nullptr);
  if (!std::isfinite(f))
    throw NonFiniteValue(name_ + ": non-finite objective");
  return f;
}

double Problem::value_and_gradient(const Eigen::VectorXd &x,
                                   Eigen::VectorXd &g) {
  check_point(x);
  ++fevals_;
  ++gevals_;
  g.resize(n_);
  const double f = compute(x, &g);
  if (!std::isfinite(f) || !g.allFinite())
    throw NonFiniteValue(name_ + ": non-finite objective or gradient");
  return f;
}

void Problem::gradient(const Eigen::VectorXd &x, Eigen::VectorXd &g) {
  check_point(x);
  ++gevals_;
  g.resize(n_);
  compute(x, &g);
  if (!g.allFinite())
    throw NonFiniteValue(name_ + ": non-finite gradient");
}

double grad_check(Problem &problem, const Eigen::VectorXd &x, double h) {
  if (!(h > 0.0))
    throw std::invalid_argument("grad_check: h must be positive");

  Eigen::VectorXd g;
  problem.value_and_gradient(x, g);

  double worst = 0.0;
  Eigen::VectorXd xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = problem.value(xp);
    xp[i] = xi - h;
    const double fm = problem.value(xp);
    xp[i] = xi;
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

namespace {
  // f = sum over pairs of 100 (x_{2i} - x_{2i-1}^2)^2 + (1 - x_{2i-1})^2
  class ExtendedRosenbrock final: public Problem {
  public:
    explicit ExtendedRosenbrock(Index n): Problem("extrosenbrock", n) {
      if (n % 2 != 0)
        throw DimensionMismatch("extrosenbrock: n must be even");
    }

    Eigen::VectorXd initial_point() const override {
      Eigen::VectorXd x(dimension());
      for (Index i = 0; i < dimension(); i += 2) {
        x[i] = -1.2;
        x[i + 1] = 1.0;
      }
      return x;
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      double f = 0.0;
      for (Index i = 0; i < dimension(); i += 2) {
        const double t1 = x[i + 1] - x[i] * x[i];
        const double t2 = 1.0 - x[i];
        f += 100.0 * t1 * t1 + t2 * t2;
        if (g != nullptr) {
          (*g)[i] = -400.0 * x[i] * t1 - 2.0 * t2;
          (*g)[i + 1] = 200.0 * t1;
        }
      }
      return f;
    }
  };

  // f = sum_{i<n} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2
  class ChainedRosenbrock final: public Problem {
  public:
    explicit ChainedRosenbrock(Index n): Problem("chainrosenbrock", n) {
      if (n < 2)
        throw DimensionMismatch("chainrosenbrock: n must be >= 2");
    }

    Eigen::VectorXd initial_point() const override {
      Eigen::VectorXd x(dimension());
      for (Index i = 0; i < dimension(); ++i)
        x[i] = (i % 2 == 0) ? -1.2 : 1.0;
      return x;
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      if (g != nullptr)
        g->setZero();
      double f = 0.0;
      for (Index i = 0; i + 1 < dimension(); ++i) {
        const double t1 = x[i + 1] - x[i] * x[i];
        const double t2 = 1.0 - x[i];
        f += 100.0 * t1 * t1 + t2 * t2;
        if (g != nullptr) {
          (*g)[i] += -400.0 * x[i] * t1 - 2.0 * t2;
          (*g)[i + 1] += 200.0 * t1;
        }
      }
      return f;
    }
  };

  // r_i = (3 - 2 x_i) x_i - x_{i-1} - 2 x_{i+1} + 1, x_0 = x_{n+1} = 0
  class BroydenTridiagonal final: public Problem {
  public:
    explicit BroydenTridiagonal(Index n): Problem("broydentri", n) { }

    Eigen::VectorXd initial_point() const override {
      return Eigen::VectorXd::Constant(dimension(), -1.0);
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      const Index n = dimension();
      if (g != nullptr)
        g->setZero();
      double f = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double xm = i > 0 ? x[i - 1] : 0.0;
        const double xp = i + 1 < n ? x[i + 1] : 0.0;
        const double r = (3.0 - 2.0 * x[i]) * x[i] - xm - 2.0 * xp + 1.0;
        f += r * r;
        if (g != nullptr) {
          (*g)[i] += 2.0 * r * (3.0 - 4.0 * x[i]);
          if (i > 0)
            (*g)[i - 1] -= 2.0 * r;
          if (i + 1 < n)
            (*g)[i + 1] -= 4.0 * r;
        }
      }
      return f;
    }
  };

  class ExtendedPowellSingular final: public Problem {
  public:
    explicit ExtendedPowellSingular(Index n): Problem("extpowell", n) {
      if (n % 4 != 0)
        throw DimensionMismatch("extpowell: n must be a multiple of 4");
    }

    Eigen::VectorXd initial_point() const override {
      Eigen::VectorXd x(dimension());
      for (Index i = 0; i < dimension(); i += 4) {
        x[i] = 3.0;
        x[i + 1] = -1.0;
        x[i + 2] = 0.0;
        x[i + 3] = 1.0;
      }
      return x;
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      double f = 0.0;
      for (Index i = 0; i < dimension(); i += 4) {
        const double t1 = x[i] + 10.0 * x[i + 1];
        const double t2 = x[i + 2] - x[i + 3];
        const double t3 = x[i + 1] - 2.0 * x[i + 2];
        const double t4 = x[i] - x[i + 3];
        f += t1 * t1 + 5.0 * t2 * t2 + t3 * t3 * t3 * t3
             + 10.0 * t4 * t4 * t4 * t4;
        if (g != nullptr) {
          const double d3 = 4.0 * t3 * t3 * t3;
          const double d4 = 40.0 * t4 * t4 * t4;
          (*g)[i] = 2.0 * t1 + d4;
          (*g)[i + 1] = 20.0 * t1 + d3;
          (*g)[i + 2] = 10.0 * t2 - 2.0 * d3;
          (*g)[i + 3] = -10.0 * t2 - d4;
        }
      }
      return f;
    }
  };

  // r_i = n - sum_j cos x_j + i (1 - cos x_i) - sin x_i, i = 1..n
  class Trigonometric final: public Problem {
  public:
    explicit Trigonometric(Index n): Problem("trigonometric", n) { }

    Eigen::VectorXd initial_point() const override {
      return Eigen::VectorXd::Constant(dimension(),
                                       1.0 / static_cast<double>(dimension()));
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      const Index n = dimension();
      const double dn = static_cast<double>(n);
      const Eigen::ArrayXd c = x.array().cos();
      const Eigen::ArrayXd s = x.array().sin();
      const double csum = c.sum();

      Eigen::ArrayXd r(n);
      for (Index i = 0; i < n; ++i)
        r[i] = dn - csum + static_cast<double>(i + 1) * (1.0 - c[i]) - s[i];

      if (g != nullptr) {
        const double rsum = r.sum();
        for (Index j = 0; j < n; ++j) {
          (*g)[j] = 2.0 * s[j] * rsum
                    + 2.0 * r[j] * (static_cast<double>(j + 1) * s[j] - c[j]);
        }
      }
      return r.square().sum();
    }
  };

  // f = sum_i (i/10) (exp(x_i) - x_i)
  class Raydan1 final: public Problem {
  public:
    explicit Raydan1(Index n): Problem("raydan1", n) { }

    Eigen::VectorXd initial_point() const override {
      return Eigen::VectorXd::Ones(dimension());
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      double f = 0.0;
      for (Index i = 0; i < dimension(); ++i) {
        const double w = static_cast<double>(i + 1) / 10.0;
        const double e = std::exp(x[i]);
        f += w * (e - x[i]);
        if (g != nullptr)
          (*g)[i] = w * (e - 1.0);
      }
      return f;
    }
  };

  // f = 1/2 sum_i d_i x_i^2 with d linearly spaced in [1, cond]
  class ConvexQuadratic final: public Problem {
  public:
    ConvexQuadratic(Index n, double cond)
        : Problem("quadratic", n), diag_(n) {
      if (cond <= 0.0)
        cond = static_cast<double>(n);
      if (cond < 1.0)
        throw std::invalid_argument("quadratic: condition number must be >= 1");
      for (Index i = 0; i < n; ++i) {
        diag_[i] = n == 1 ? 1.0
                          : 1.0 + (cond - 1.0) * static_cast<double>(i)
                                      / static_cast<double>(n - 1);
      }
    }

    Eigen::VectorXd initial_point() const override {
      return Eigen::VectorXd::Ones(dimension());
    }

  protected:
    double compute(const Eigen::VectorXd &x, Eigen::VectorXd *g) const override {
      if (g != nullptr)
        *g = diag_.cwiseProduct(x);
      return 0.5 * x.dot(diag_.cwiseProduct(x));
    }

  private:
    Eigen::VectorXd diag_;
  };
}  // namespace

const std::vector<std::string> &problem_names() {
  static const std::vector<std::string> names {
    "extrosenbrock", "chainrosenbrock", "broydentri", "extpowell",
    "trigonometric", "raydan1",         "quadratic",
  };
  return names;
}

std::unique_ptr<Problem> make_problem(std::string_view name, Index n,
                                      double param) {
  if (name == "extrosenbrock")
    return std::make_unique<ExtendedRosenbrock>(n);
  if (name == "chainrosenbrock")
    return std::make_unique<ChainedRosenbrock>(n);
  if (name == "broydentri")
    return std::make_unique<BroydenTridiagonal>(n);
  if (name == "extpowell")
    return std::make_unique<ExtendedPowellSingular>(n);
  if (name == "trigonometric")
    return std::make_unique<Trigonometric>(n);
  if (name == "raydan1")
    return std::make_unique<Raydan1>(n);
  if (name == "quadratic")
    return std::make_unique<ConvexQuadratic>(n, param);
  throw UnknownProblem(std::string(name));
}

}  // namespace rlqn
