//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "rlqn/compact.hpp"
#include "rlqn/errors.hpp"
#include "rlqn/linesearch.hpp"

namespace rlqn {

void SolverConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw ConfigError(std::string("invalid solver configuration: ") + what);
  };
  require(m >= 1, "m >= 1");
  require(0.0 < c1 && c1 < c2 && c2 < 1.0, "0 < c1 < c2 < 1");
  require(0.0 < sigma1 && sigma1 < 1.0 && 1.0 < sigma2,
          "0 < sigma1 < 1 < sigma2");
  require(0.0 < p_min && p_min < 1.0, "p_min in (0, 1)");
  require(mu_min > 0.0 && mu0 >= mu_min, "mu0 >= mu_min > 0");
  require(mu_max >= mu0, "mu_max >= mu0");
  require(eps_cautious >= 0.0, "eps_cautious >= 0");
  require(tol_g >= 0.0, "tol_g >= 0");
  require(max_iters >= 0, "max_iters >= 0");
  require(nonmonotone_M >= 0, "nonmonotone_M >= 0");
  require(t_min > 0.0, "t_min > 0");
}

std::string_view status_name(RunStatus status) {
  switch (status) {
  case RunStatus::kConverged:
    return "Converged";
  case RunStatus::kMaxIters:
    return "MaxIters";
  case RunStatus::kMuOverflow:
    return "MuOverflow";
  case RunStatus::kLineSearchFail:
    return "LineSearchFail";
  case RunStatus::kNumericalError:
    return "NumericalError";
  }
  return "NumericalError";
}

RunStatus parse_status(std::string_view name) {
  for (RunStatus s: {RunStatus::kConverged, RunStatus::kMaxIters,
                     RunStatus::kMuOverflow, RunStatus::kLineSearchFail,
                     RunStatus::kNumericalError}) {
    if (status_name(s) == name)
      return s;
  }
  throw std::invalid_argument("unknown run status: " + std::string(name));
}

std::string_view step_class_name(StepClass cls) {
  switch (cls) {
  case StepClass::kUnsuccessful:
    return "unsuccessful";
  case StepClass::kSuccessful:
    return "successful";
  case StepClass::kHighlySuccessful:
    return "highly-successful";
  }
  return "unsuccessful";
}

double RunReport::accepted_ratio() const {
  if (iters == 0)
    return 1.0;
  return static_cast<double>(accepted_steps) / static_cast<double>(iters);
}

MuUpdate classify_and_update_mu(bool solvable, double pred, double ared,
                                double d_norm, double g_norm, double mu,
                                const SolverConfig &cfg) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!solvable || !(pred > cfg.p_min * g_norm * d_norm))
    return {StepClass::kUnsuccessful, cfg.sigma2 * mu, nan};

  const double rho = ared / pred;
  // a NaN ratio fails every comparison and lands here
  if (!(rho > cfg.c1))
    return {StepClass::kUnsuccessful, cfg.sigma2 * mu, rho};
  if (rho <= cfg.c2)
    return {StepClass::kSuccessful, mu, rho};
  return {StepClass::kHighlySuccessful, std::max(cfg.sigma1 * mu, cfg.mu_min),
          rho};
}

double nonmonotone_ref(const std::deque<double> &history, std::int64_t k,
                       int M) {
  if (history.empty())
    throw std::invalid_argument("nonmonotone_ref: empty history");
  if (M <= 0 || k < M)
    return history.back();
  const auto first = history.end()
                     - std::min<std::ptrdiff_t>(M, std::ssize(history));
  return *std::max_element(first, history.end());
}

namespace {
  double inf_norm(const Eigen::VectorXd &v) {
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }

  // Shared prologue: evaluates x0 and runs the seed search. Returns a
  // terminal status when the run ends before the main loop.
  struct Start {
    Eigen::VectorXd x, g;
    double f = 0.0;
  };

  std::optional<RunStatus> start_run(Problem &problem, const SolverConfig &cfg,
                                     MemoryState &mem, Scheme push_scheme,
                                     Start &st, RunReport &report) {
    st.x = problem.initial_point();
    try {
      st.f = problem.value_and_gradient(st.x, st.g);
    } catch (const NonFiniteValue &) {
      return RunStatus::kNumericalError;
    }
    if (inf_norm(st.g) < cfg.tol_g || st.g.squaredNorm() == 0.0)
      return RunStatus::kConverged;

    LineSearchParams ls;
    ls.t_min = cfg.t_min;
    const std::int64_t before = problem.feval_count();
    try {
      SeedResult seed = initial_seed_search(problem, st.x, st.f, st.g, ls);
      report.seed_fevals = problem.feval_count() - before;
      mem.push_pair(seed.s0, seed.y0, seed.g1, nullptr, push_scheme);
      st.x = std::move(seed.x1);
      st.f = seed.f1;
      st.g = std::move(seed.g1);
    } catch (const LineSearchFailed &) {
      report.seed_fevals = problem.feval_count() - before;
      return RunStatus::kLineSearchFail;
    }
    return std::nullopt;
  }

  void push_history(std::deque<double> &history, double f, int M) {
    history.push_back(f);
    const std::size_t keep = static_cast<std::size_t>(std::max(M, 1));
    while (history.size() > keep)
      history.pop_front();
  }

  void finish(RunReport &report, Problem &problem, RunStatus status,
              std::int64_t f0, std::int64_t g0, const Start &st) {
    report.status = status;
    report.fevals = problem.feval_count() - f0;
    report.gevals = problem.geval_count() - g0;
    report.final_f = st.f;
    report.final_g_inf = inf_norm(st.g);
    report.x = st.x;
  }
}  // namespace

RunReport run_regularized(Problem &problem, const SolverConfig &cfg,
                          const RunOptions &opts) {
  cfg.validate();
  RunReport report;
  const std::int64_t f0 = problem.feval_count();
  const std::int64_t g0 = problem.geval_count();

  MemoryState mem(problem.dimension(), cfg.m, cfg.eps_cautious);
  Start st;
  double mu = cfg.mu0;
  report.final_mu = mu;
  if (auto status = start_run(problem, cfg, mem, cfg.scheme, st, report)) {
    finish(report, problem, *status, f0, g0, st);
    return report;
  }

  WorkCounter wc;
  double g_norm2 = kernels::squared_norm(st.g, &wc);
  std::deque<double> history;
  push_history(history, st.f, cfg.nonmonotone_M);

  Eigen::VectorXd d, x_trial, g_new, y;
  std::int64_t k = 0;
  RunStatus status;
  while (true) {
    if (inf_norm(st.g) < cfg.tol_g) {
      status = RunStatus::kConverged;
      break;
    }
    if (k >= cfg.max_iters) {
      status = RunStatus::kMaxIters;
      break;
    }
    if (mu > cfg.mu_max) {
      status = RunStatus::kMuOverflow;
      break;
    }

    const WorkCounter work_before = wc;
    IterationRecord rec;
    rec.k = k;
    rec.f = st.f;
    rec.g_inf = inf_norm(st.g);
    rec.mu = mu;

    StepPlan plan = plan_regularized_step(mem, cfg.scheme, g_norm2, mu);
    const double g_norm = std::sqrt(g_norm2);
    double d_norm = std::sqrt(plan.d_norm2);
    double pred = plan.pred;

    bool screened_out = !plan.solvable
                        || !(pred > cfg.p_min * g_norm * d_norm);
    if (!screened_out && opts.direction_hook) {
      form_direction(mem, plan, st.g, d, &wc);
      opts.direction_hook(d);
      pred = predicted_reduction(d, st.g, mu);
      d_norm = d.norm();
      screened_out = !(pred > cfg.p_min * g_norm * d_norm);
    } else if (!screened_out) {
      form_direction(mem, plan, st.g, d, &wc);
    }
    rec.pred = pred;

    MuUpdate upd;
    if (screened_out) {
      upd = classify_and_update_mu(plan.solvable, pred, 0.0, d_norm, g_norm,
                                   mu, cfg);
    } else {
      x_trial = st.x + d;
      const double f_ref = nonmonotone_ref(history, k, cfg.nonmonotone_M);
      double f_trial;
      try {
        f_trial = problem.value(x_trial);
      } catch (const NonFiniteValue &) {
        f_trial = std::numeric_limits<double>::infinity();
      }
      rec.evaluated = true;
      rec.ared = f_ref - f_trial;
      upd = classify_and_update_mu(true, pred, rec.ared, d_norm, g_norm, mu,
                                   cfg);

      if (upd.cls != StepClass::kUnsuccessful) {
        try {
          problem.gradient(x_trial, g_new);
        } catch (const NonFiniteValue &) {
          status = RunStatus::kNumericalError;
          break;
        }
        y = g_new - st.g;
        const bool exact_repr = !opts.direction_hook;
        mem.push_pair(d, y, g_new, exact_repr ? &plan.repr : nullptr,
                      cfg.scheme, &wc);
        st.x.swap(x_trial);
        st.g.swap(g_new);
        st.f = f_trial;
        g_norm2 = kernels::squared_norm(st.g, &wc);
        ++report.accepted_steps;
      }
    }
    rec.rho = upd.rho;
    rec.cls = upd.cls;
    mu = upd.mu_next;
    push_history(history, st.f, cfg.nonmonotone_M);
    ++k;

    rec.work = wc - work_before;
    if (opts.keep_trace)
      report.trace.push_back(rec);
  }

  report.iters = k;
  report.final_mu = mu;
  finish(report, problem, status, f0, g0, st);
  return report;
}

RunReport run_linesearch_lbfgs(Problem &problem, const SolverConfig &cfg,
                               SearchKind kind, const RunOptions &opts) {
  cfg.validate();
  RunReport report;
  const std::int64_t f0 = problem.feval_count();
  const std::int64_t g0 = problem.geval_count();

  MemoryState mem(problem.dimension(), cfg.m, cfg.eps_cautious);
  Start st;
  if (auto status = start_run(problem, cfg, mem, Scheme::kBfgs, st, report)) {
    finish(report, problem, *status, f0, g0, st);
    return report;
  }

  LineSearchParams ls;
  ls.c1 = cfg.c1;
  ls.c2 = cfg.c2;
  ls.t_min = cfg.t_min;

  WorkCounter wc;
  double g_norm2 = kernels::squared_norm(st.g, &wc);
  std::deque<double> history;
  push_history(history, st.f, cfg.nonmonotone_M);

  Eigen::VectorXd d, g_new;
  std::int64_t k = 0;
  std::int64_t trials = 0;
  RunStatus status;
  while (true) {
    if (inf_norm(st.g) < cfg.tol_g) {
      status = RunStatus::kConverged;
      break;
    }
    if (k >= cfg.max_iters) {
      status = RunStatus::kMaxIters;
      break;
    }

    const WorkCounter work_before = wc;
    IterationRecord rec;
    rec.k = k;
    rec.f = st.f;
    rec.g_inf = inf_norm(st.g);

    // two-loop direction without regularization
    const StepPlan plan
        = plan_regularized_step(mem, Scheme::kBfgsSecant, g_norm2, 0.0);
    if (!plan.solvable) {
      status = RunStatus::kNumericalError;
      break;
    }
    form_direction(mem, plan, st.g, d, &wc);
    if (opts.direction_hook)
      opts.direction_hook(d);
    const double g_dot_d = kernels::dot(st.g, d, &wc);
    const double f_ref = nonmonotone_ref(history, k, cfg.nonmonotone_M);

    SearchOutcome r;
    try {
      if (kind == SearchKind::kArmijo) {
        r = armijo_backtrack(problem, st.x, d, f_ref, g_dot_d, ls);
        if (r.converged) {
          problem.gradient(r.x_new, g_new);
          r.g_new = g_new;
        }
      } else {
        r = more_thuente(problem, st.x, d, f_ref, g_dot_d, 1.0, ls);
      }
    } catch (const NotDescent &) {
      status = RunStatus::kLineSearchFail;
      break;
    } catch (const NonFiniteValue &) {
      status = RunStatus::kNumericalError;
      break;
    }
    trials += r.fevals;
    if (!r.converged) {
      status = RunStatus::kLineSearchFail;
      break;
    }

    const Eigen::VectorXd s = r.x_new - st.x;
    const Eigen::VectorXd y = *r.g_new - st.g;
    // s = t d keeps the cached representation, rescaled
    StepRepresentation repr{plan.gamma_hat / r.t, r.t * plan.repr.coeffs};
    const bool exact_repr = !opts.direction_hook;
    mem.push_pair(s, y, *r.g_new, exact_repr ? &repr : nullptr, Scheme::kBfgs,
                  &wc);

    st.x = std::move(r.x_new);
    st.g = std::move(*r.g_new);
    st.f = r.f_new;
    g_norm2 = kernels::squared_norm(st.g, &wc);
    ++report.accepted_steps;
    push_history(history, st.f, cfg.nonmonotone_M);
    ++k;

    rec.mu = r.t;
    rec.evaluated = true;
    rec.cls = StepClass::kSuccessful;
    rec.ared = f_ref - st.f;
    rec.work = wc - work_before;
    if (opts.keep_trace)
      report.trace.push_back(rec);
  }

  report.iters = trials;
  finish(report, problem, status, f0, g0, st);
  return report;
}

const std::vector<AlgoSpec> &algorithms() {
  static const std::vector<AlgoSpec> specs {
    {"regLBFGS", true, Scheme::kBfgs, SearchKind::kArmijo},
    {"regLBFGSsec", true, Scheme::kBfgsSecant, SearchKind::kArmijo},
    {"regLSR1", true, Scheme::kSr1, SearchKind::kArmijo},
    {"regLPSB", true, Scheme::kPsb, SearchKind::kArmijo},
    {"armijoLBFGS", false, Scheme::kBfgs, SearchKind::kArmijo},
    {"wolfeLBFGS", false, Scheme::kBfgs, SearchKind::kWolfe},
  };
  return specs;
}

const AlgoSpec &find_algorithm(std::string_view name) {
  for (const AlgoSpec &a: algorithms()) {
    if (a.name == name)
      return a;
  }
  throw UnknownAlgo(std::string(name));
}

RunReport run_algorithm(const AlgoSpec &algo, Problem &problem,
                        SolverConfig cfg, const RunOptions &opts) {
  cfg.scheme = algo.scheme;
  if (algo.regularized)
    return run_regularized(problem, cfg, opts);
  return run_linesearch_lbfgs(problem, cfg, algo.search, opts);
}

}  // namespace rlqn
