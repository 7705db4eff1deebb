//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/rlqn.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rlqn/bench.hpp"
#include "rlqn/driver.hpp"
#include "rlqn/errors.hpp"
#include "rlqn/problems.hpp"

struct rlqn_problem {
  std::unique_ptr<rlqn::Problem> impl;
};

struct rlqn_config {
  rlqn::SolverConfig cfg;
  int threads = 1;
};

struct rlqn_report {
  rlqn::RunReport report;
};

struct rlqn_results {
  std::vector<rlqn::ResultRow> rows;
  std::vector<rlqn::AcceptanceSummary> summary;
};

struct rlqn_profile {
  std::vector<rlqn::ProfileCurve> curves;
};

namespace {
  thread_local std::string last_error;

  class IoError: public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  class ParseError: public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  rlqn_status fail(rlqn_status code, const char *what) {
    last_error = what;
    return code;
  }

  template <typename F>
  rlqn_status guarded(F &&body) {
    try {
      body();
      last_error.clear();
      return RLQN_OK;
    } catch (const rlqn::UnknownProblem &e) {
      return fail(RLQN_ERR_UNKNOWN_PROBLEM, e.what());
    } catch (const rlqn::UnknownAlgo &e) {
      return fail(RLQN_ERR_UNKNOWN_ALGO, e.what());
    } catch (const rlqn::DimensionMismatch &e) {
      return fail(RLQN_ERR_DIMENSION, e.what());
    } catch (const rlqn::DuplicateRow &e) {
      return fail(RLQN_ERR_DUPLICATE_ROW, e.what());
    } catch (const rlqn::NonFiniteValue &e) {
      return fail(RLQN_ERR_NUMERICAL, e.what());
    } catch (const IoError &e) {
      return fail(RLQN_ERR_IO, e.what());
    } catch (const ParseError &e) {
      return fail(RLQN_ERR_PARSE, e.what());
    } catch (const std::invalid_argument &e) {
      return fail(RLQN_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception &e) {
      return fail(RLQN_ERR_INTERNAL, e.what());
    } catch (...) {
      return fail(RLQN_ERR_INTERNAL, "unknown error");
    }
  }

  void require(bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(what);
  }

  Eigen::VectorXd to_vector(const double *x, size_t len, rlqn::Index n) {
    require(x != nullptr, "null point");
    if (static_cast<rlqn::Index>(len) != n)
      throw rlqn::DimensionMismatch("point length differs from dimension");
    return Eigen::Map<const Eigen::VectorXd>(x, n);
  }

  std::ofstream open_out(const char *path) {
    require(path != nullptr, "null path");
    std::ofstream out(path);
    if (!out)
      throw IoError(std::string("cannot open for writing: ") + path);
    return out;
  }

  void close_out(std::ofstream &out, const char *path) {
    out.flush();
    if (!out)
      throw IoError(std::string("write failed: ") + path);
  }

  double *config_field(rlqn::SolverConfig &c, const std::string &key) {
    if (key == "mu0")
      return &c.mu0;
    if (key == "p_min")
      return &c.p_min;
    if (key == "c1")
      return &c.c1;
    if (key == "c2")
      return &c.c2;
    if (key == "sigma1")
      return &c.sigma1;
    if (key == "sigma2")
      return &c.sigma2;
    if (key == "mu_min")
      return &c.mu_min;
    if (key == "mu_max")
      return &c.mu_max;
    if (key == "eps_cautious")
      return &c.eps_cautious;
    if (key == "tol_g")
      return &c.tol_g;
    if (key == "t_min")
      return &c.t_min;
    return nullptr;
  }

  bool is_whole(double v) { return std::isfinite(v) && v == std::floor(v); }
}  // namespace

extern "C" {

const char *rlqn_version(void) { return "0.1.0"; }

const char *rlqn_last_error(void) { return last_error.c_str(); }

const char *rlqn_status_string(rlqn_status status) {
  switch (status) {
  case RLQN_OK:
    return "ok";
  case RLQN_ERR_INVALID_ARGUMENT:
    return "invalid argument";
  case RLQN_ERR_UNKNOWN_PROBLEM:
    return "unknown problem";
  case RLQN_ERR_UNKNOWN_ALGO:
    return "unknown algorithm";
  case RLQN_ERR_DIMENSION:
    return "dimension mismatch";
  case RLQN_ERR_IO:
    return "i/o error";
  case RLQN_ERR_PARSE:
    return "parse error";
  case RLQN_ERR_DUPLICATE_ROW:
    return "duplicate row";
  case RLQN_ERR_NUMERICAL:
    return "numerical error";
  case RLQN_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

size_t rlqn_problem_name_count(void) { return rlqn::problem_names().size(); }

const char *rlqn_problem_name_at(size_t index) {
  const auto &names = rlqn::problem_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

rlqn_status rlqn_problem_create(const char *name, int64_t n, double param,
                                rlqn_problem **out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto p = std::make_unique<rlqn_problem>();
    p->impl = rlqn::make_problem(name, n, param);
    *out = p.release();
  });
}

void rlqn_problem_destroy(rlqn_problem *problem) { delete problem; }

int64_t rlqn_problem_dimension(const rlqn_problem *problem) {
  return problem == nullptr ? 0 : problem->impl->dimension();
}

rlqn_status rlqn_problem_initial_point(const rlqn_problem *problem, double *x,
                                       size_t len) {
  return guarded([&] {
    require(problem != nullptr && x != nullptr, "null argument");
    const Eigen::VectorXd x0 = problem->impl->initial_point();
    if (static_cast<rlqn::Index>(len) != x0.size())
      throw rlqn::DimensionMismatch("buffer length differs from dimension");
    Eigen::Map<Eigen::VectorXd>(x, x0.size()) = x0;
  });
}

rlqn_status rlqn_problem_eval(rlqn_problem *problem, const double *x,
                              size_t len, double *f, double *g) {
  return guarded([&] {
    require(problem != nullptr && f != nullptr, "null argument");
    const Eigen::VectorXd xv = to_vector(x, len, problem->impl->dimension());
    if (g == nullptr) {
      *f = problem->impl->value(xv);
    } else {
      Eigen::VectorXd gv;
      *f = problem->impl->value_and_gradient(xv, gv);
      Eigen::Map<Eigen::VectorXd>(g, gv.size()) = gv;
    }
  });
}

rlqn_status rlqn_problem_grad_check(rlqn_problem *problem, const double *x,
                                    size_t len, double h,
                                    double *max_rel_err) {
  return guarded([&] {
    require(problem != nullptr && max_rel_err != nullptr, "null argument");
    const Eigen::VectorXd xv = to_vector(x, len, problem->impl->dimension());
    *max_rel_err = rlqn::grad_check(*problem->impl, xv, h);
  });
}

void rlqn_problem_counters(const rlqn_problem *problem, int64_t *fevals,
                           int64_t *gevals) {
  if (problem == nullptr)
    return;
  if (fevals != nullptr)
    *fevals = problem->impl->feval_count();
  if (gevals != nullptr)
    *gevals = problem->impl->geval_count();
}

rlqn_status rlqn_config_create(rlqn_config **out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new rlqn_config();
  });
}

void rlqn_config_destroy(rlqn_config *cfg) { delete cfg; }

rlqn_status rlqn_config_set(rlqn_config *cfg, const char *key, double value) {
  return guarded([&] {
    require(cfg != nullptr && key != nullptr, "null argument");
    const std::string k(key);
    if (k == "m" || k == "max_iters" || k == "nonmonotone" || k == "threads") {
      if (!is_whole(value) || value < 0.0)
        throw std::invalid_argument("'" + k
                                    + "' must be a non-negative integer");
      if (k == "m")
        cfg->cfg.m = static_cast<rlqn::Index>(value);
      else if (k == "max_iters")
        cfg->cfg.max_iters = static_cast<std::int64_t>(value);
      else if (k == "nonmonotone")
        cfg->cfg.nonmonotone_M = static_cast<int>(value);
      else
        cfg->threads = static_cast<int>(value);
      return;
    }
    double *field = config_field(cfg->cfg, k);
    if (field == nullptr)
      throw std::invalid_argument("unknown configuration key: " + k);
    *field = value;
  });
}

rlqn_status rlqn_config_get(const rlqn_config *cfg, const char *key,
                            double *value) {
  return guarded([&] {
    require(cfg != nullptr && key != nullptr && value != nullptr,
            "null argument");
    const std::string k(key);
    if (k == "m")
      *value = static_cast<double>(cfg->cfg.m);
    else if (k == "max_iters")
      *value = static_cast<double>(cfg->cfg.max_iters);
    else if (k == "nonmonotone")
      *value = cfg->cfg.nonmonotone_M;
    else if (k == "threads")
      *value = cfg->threads;
    else {
      rlqn::SolverConfig copy = cfg->cfg;
      const double *field = config_field(copy, k);
      if (field == nullptr)
        throw std::invalid_argument("unknown configuration key: " + k);
      *value = *field;
    }
  });
}

rlqn_status rlqn_config_validate(const rlqn_config *cfg) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    cfg->cfg.validate();
  });
}

size_t rlqn_algo_count(void) { return rlqn::algorithms().size(); }

const char *rlqn_algo_name_at(size_t index) {
  const auto &algos = rlqn::algorithms();
  return index < algos.size() ? algos[index].name.c_str() : nullptr;
}

rlqn_status rlqn_solve(const char *algo, rlqn_problem *problem,
                       const rlqn_config *cfg, int keep_trace,
                       rlqn_report **out) {
  return guarded([&] {
    require(algo != nullptr && problem != nullptr && out != nullptr,
            "null argument");
    *out = nullptr;
    const rlqn::AlgoSpec &spec = rlqn::find_algorithm(algo);
    rlqn::RunOptions opts;
    opts.keep_trace = keep_trace != 0;
    auto r = std::make_unique<rlqn_report>();
    r->report = rlqn::run_algorithm(spec, *problem->impl,
                                    cfg != nullptr ? cfg->cfg
                                                   : rlqn::SolverConfig {},
                                    opts);
    *out = r.release();
  });
}

void rlqn_report_destroy(rlqn_report *report) { delete report; }

rlqn_status rlqn_report_get_summary(const rlqn_report *report,
                                    rlqn_report_summary *out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    const rlqn::RunReport &r = report->report;
    out->status = rlqn::status_name(r.status).data();
    out->iters = r.iters;
    out->fevals = r.fevals;
    out->gevals = r.gevals;
    out->seed_fevals = r.seed_fevals;
    out->accepted_steps = r.accepted_steps;
    out->accepted_ratio = r.accepted_ratio();
    out->final_g_inf = r.final_g_inf;
    out->final_f = r.final_f;
    out->final_mu = r.final_mu;
  });
}

rlqn_status rlqn_report_solution(const rlqn_report *report, double *x,
                                 size_t len) {
  return guarded([&] {
    require(report != nullptr && x != nullptr, "null argument");
    const Eigen::VectorXd &sol = report->report.x;
    if (static_cast<rlqn::Index>(len) != sol.size())
      throw rlqn::DimensionMismatch("buffer length differs from dimension");
    Eigen::Map<Eigen::VectorXd>(x, sol.size()) = sol;
  });
}

rlqn_status rlqn_report_write_trace(const rlqn_report *report,
                                    const char *path) {
  return guarded([&] {
    require(report != nullptr, "null argument");
    std::ofstream out = open_out(path);
    out << "k,f,g_inf,mu_or_t,pred,ared,rho,class,evaluated,work_matvec,"
           "work_vector\n";
    char buf[512];
    for (const rlqn::IterationRecord &rec: report->report.trace) {
      std::snprintf(buf, sizeof buf,
                    "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%d,%llu,%llu\n",
                    static_cast<long long>(rec.k), rec.f, rec.g_inf, rec.mu,
                    rec.pred, rec.ared, rec.rho,
                    rlqn::step_class_name(rec.cls).data(), rec.evaluated ? 1 : 0,
                    static_cast<unsigned long long>(rec.work.matvec),
                    static_cast<unsigned long long>(rec.work.vector));
      out << buf;
    }
    close_out(out, path);
  });
}

rlqn_status rlqn_bench_run(const char *algos, const char *problems,
                           int64_t default_n, const rlqn_config *cfg,
                           rlqn_results **out) {
  return guarded([&] {
    require(algos != nullptr && problems != nullptr && out != nullptr,
            "null argument");
    *out = nullptr;
    const auto algo_list = rlqn::parse_algo_list(algos);
    const auto problem_list = rlqn::parse_problem_list(problems, default_n);
    rlqn::SuiteOptions options;
    if (cfg != nullptr) {
      options.cfg = cfg->cfg;
      options.threads = cfg->threads;
    }
    auto r = std::make_unique<rlqn_results>();
    r->rows = rlqn::run_suite(algo_list, problem_list, options);
    r->summary = rlqn::acceptance_summary(r->rows);
    *out = r.release();
  });
}

rlqn_status rlqn_results_read(const char *path, rlqn_results **out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    std::ifstream in(path);
    if (!in)
      throw IoError(std::string("cannot open for reading: ") + path);
    auto r = std::make_unique<rlqn_results>();
    try {
      r->rows = rlqn::read_results_csv(in);
    } catch (const std::runtime_error &e) {
      throw ParseError(e.what());
    }
    r->summary = rlqn::acceptance_summary(r->rows);
    *out = r.release();
  });
}

rlqn_status rlqn_results_write(const rlqn_results *results, const char *path) {
  return guarded([&] {
    require(results != nullptr, "null argument");
    std::ofstream out = open_out(path);
    rlqn::write_results_csv(out, results->rows);
    close_out(out, path);
  });
}

void rlqn_results_destroy(rlqn_results *results) { delete results; }

size_t rlqn_results_count(const rlqn_results *results) {
  return results == nullptr ? 0 : results->rows.size();
}

rlqn_status rlqn_results_row(const rlqn_results *results, size_t index,
                             rlqn_result_row *out) {
  return guarded([&] {
    require(results != nullptr && out != nullptr, "null argument");
    require(index < results->rows.size(), "row index out of range");
    const rlqn::ResultRow &r = results->rows[index];
    out->problem = r.problem.c_str();
    out->n = r.n;
    out->algo = r.algo.c_str();
    out->status = r.status.c_str();
    out->fevals = r.fevals;
    out->gevals = r.gevals;
    out->iters = r.iters;
    out->accepted_ratio = r.accepted_ratio;
    out->final_g_inf = r.final_g_inf;
    out->final_f = r.final_f;
    out->wall_ms = r.wall_ms;
  });
}

size_t rlqn_results_algo_count(const rlqn_results *results) {
  return results == nullptr ? 0 : results->summary.size();
}

rlqn_status rlqn_results_acceptance(const rlqn_results *results, size_t index,
                                    const char **algo, double *mean_ratio,
                                    int64_t *rows, int64_t *converged) {
  return guarded([&] {
    require(results != nullptr, "null argument");
    require(index < results->summary.size(), "algorithm index out of range");
    const rlqn::AcceptanceSummary &s = results->summary[index];
    if (algo != nullptr)
      *algo = s.algo.c_str();
    if (mean_ratio != nullptr)
      *mean_ratio = s.mean_accepted_ratio;
    if (rows != nullptr)
      *rows = s.rows;
    if (converged != nullptr)
      *converged = s.converged;
  });
}

rlqn_status rlqn_profile_compute(const rlqn_results *results,
                                 int drop_all_fail, rlqn_profile **out) {
  return guarded([&] {
    require(results != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto p = std::make_unique<rlqn_profile>();
    p->curves = rlqn::perf_profile(results->rows, drop_all_fail != 0);
    *out = p.release();
  });
}

void rlqn_profile_destroy(rlqn_profile *profile) { delete profile; }

rlqn_status rlqn_profile_write(const rlqn_profile *profile, const char *path) {
  return guarded([&] {
    require(profile != nullptr, "null argument");
    std::ofstream out = open_out(path);
    rlqn::write_profile_csv(out, profile->curves);
    close_out(out, path);
  });
}

rlqn_status rlqn_profile_rho_at(const rlqn_profile *profile, const char *algo,
                                double tau, double *rho) {
  return guarded([&] {
    require(profile != nullptr && algo != nullptr && rho != nullptr,
            "null argument");
    for (const rlqn::ProfileCurve &c: profile->curves) {
      if (c.algo == algo) {
        *rho = c.rho_at(tau);
        return;
      }
    }
    throw rlqn::UnknownAlgo(algo);
  });
}

}  // extern "C"
