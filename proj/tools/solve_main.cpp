//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "cli_common.hpp"

int main(int argc, char **argv) {
  CLI::App app {"Solve one test problem with one algorithm"};

  std::string algo = "regLBFGS";
  std::string problem_name;
  long long n = 1000;
  double param = 0.0;
  std::string trace_path;
  cli::ConfigOptions opts;

  app.add_option("--algo", algo, "algorithm name");
  app.add_option("--problem", problem_name, "problem name")->required();
  app.add_option("--n", n, "dimension");
  app.add_option("--param", param, "problem parameter (quadratic: condition)");
  app.add_option("--memory", opts.memory, "number of stored pairs");
  app.add_option("--nonmonotone", opts.nonmonotone,
                 "nonmonotone window (0 = monotone)");
  app.add_option("--tol", opts.tol, "gradient infinity-norm tolerance");
  app.add_option("--max-iters", opts.max_iters, "iteration limit");
  app.add_option("--mu0", opts.mu0, "initial regularization");
  app.add_option("--trace", trace_path, "write a per-iteration CSV trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  rlqn_problem *problem = nullptr;
  rlqn_config *cfg = nullptr;
  rlqn_report *report = nullptr;
  int code = cli::kExitOk;
  try {
    cli::check(rlqn_problem_create(problem_name.c_str(), n, param, &problem),
               "problem");
    cfg = cli::make_config(opts);
    cli::check(rlqn_solve(algo.c_str(), problem, cfg, trace_path.empty() ? 0 : 1,
                          &report),
               "solve");
    rlqn_report_summary s;
    cli::check(rlqn_report_get_summary(report, &s), "report");
    std::printf("problem        %s (n = %lld)\n", problem_name.c_str(), n);
    std::printf("algorithm      %s\n", algo.c_str());
    std::printf("status         %s\n", s.status);
    std::printf("iterations     %lld\n", static_cast<long long>(s.iters));
    std::printf("accepted       %lld (ratio %.4f)\n",
                static_cast<long long>(s.accepted_steps), s.accepted_ratio);
    std::printf("f evaluations  %lld (initial search %lld)\n",
                static_cast<long long>(s.fevals),
                static_cast<long long>(s.seed_fevals));
    std::printf("g evaluations  %lld\n", static_cast<long long>(s.gevals));
    std::printf("final f        %.10e\n", s.final_f);
    std::printf("final |g|_inf  %.3e\n", s.final_g_inf);
    if (!trace_path.empty())
      cli::check(rlqn_report_write_trace(report, trace_path.c_str()), "trace");
  } catch (const cli::Failure &f) {
    code = cli::exit_code_for(f.status);
  }
  rlqn_report_destroy(report);
  rlqn_config_destroy(cfg);
  rlqn_problem_destroy(problem);
  return code;
}
