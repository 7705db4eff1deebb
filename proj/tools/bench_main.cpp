//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "cli_common.hpp"

namespace {
  int run_command(const std::string &algos, const std::string &problems,
                  long long n, const cli::ConfigOptions &opts,
                  const std::string &out_path) {
    rlqn_config *cfg = cli::make_config(opts);
    rlqn_results *results = nullptr;
    const rlqn_status st = rlqn_bench_run(algos.c_str(), problems.c_str(), n,
                                          cfg, &results);
    rlqn_config_destroy(cfg);
    cli::check(st, "bench run");

    const rlqn_status wst = rlqn_results_write(results, out_path.c_str());
    if (wst != RLQN_OK) {
      rlqn_results_destroy(results);
      cli::check(wst, "writing results");
    }

    std::printf("%zu runs written to %s\n", rlqn_results_count(results),
                out_path.c_str());
    std::printf("%-14s %8s %10s %14s\n", "algo", "runs", "converged",
                "mean_accepted");
    for (size_t i = 0; i < rlqn_results_algo_count(results); ++i) {
      const char *algo = nullptr;
      double mean = 0.0;
      int64_t rows = 0, conv = 0;
      rlqn_results_acceptance(results, i, &algo, &mean, &rows, &conv);
      std::printf("%-14s %8lld %10lld %14.4f\n", algo,
                  static_cast<long long>(rows), static_cast<long long>(conv),
                  mean);
    }
    rlqn_results_destroy(results);
    return cli::kExitOk;
  }

  int profile_command(const std::string &in_path, const std::string &out_path,
                      bool drop_all_fail) {
    rlqn_results *results = nullptr;
    cli::check(rlqn_results_read(in_path.c_str(), &results), "reading results");
    rlqn_profile *profile = nullptr;
    const rlqn_status st
        = rlqn_profile_compute(results, drop_all_fail ? 1 : 0, &profile);
    rlqn_results_destroy(results);
    cli::check(st, "profile");
    const rlqn_status wst = rlqn_profile_write(profile, out_path.c_str());
    rlqn_profile_destroy(profile);
    cli::check(wst, "writing profile");
    std::printf("profile written to %s\n", out_path.c_str());
    return cli::kExitOk;
  }
}  // namespace

int main(int argc, char **argv) {
  CLI::App app {"Benchmark harness for the regularized quasi-Newton solvers"};
  app.require_subcommand(1);

  std::string algos = "all";
  std::string problems = "all";
  long long n = 1000;
  long long seed = 0;
  std::string out_path = "results.csv";
  cli::ConfigOptions opts;
  opts.threads = std::max(1u, std::thread::hardware_concurrency());

  CLI::App *run = app.add_subcommand("run", "run an algorithm x problem matrix");
  run->add_option("--algos", algos, "comma-separated algorithms or 'all'");
  run->add_option("--problems", problems,
                  "comma-separated name[:n[:param]] entries or 'all'");
  run->add_option("--n", n, "dimension for entries without one");
  run->add_option("--memory", opts.memory, "number of stored pairs");
  run->add_option("--nonmonotone", opts.nonmonotone,
                  "nonmonotone window (0 = monotone)");
  run->add_option("--tol", opts.tol, "gradient infinity-norm tolerance");
  run->add_option("--max-iters", opts.max_iters, "iteration limit");
  run->add_option("--mu0", opts.mu0, "initial regularization");
  run->add_option("--threads", opts.threads, "parallel workers");
  run->add_option("--seed", seed,
                  "accepted for reproducibility records; runs are "
                  "deterministic");
  run->add_option("--out", out_path, "results CSV path");

  std::string in_path;
  std::string profile_out = "profile.csv";
  bool drop_all_fail = false;
  CLI::App *prof = app.add_subcommand("profile",
                                      "performance profile from a results CSV");
  prof->add_option("--in", in_path, "results CSV")->required();
  prof->add_option("--out", profile_out, "profile CSV path");
  prof->add_flag("--drop-all-fail", drop_all_fail,
                 "ignore problems that no algorithm solved");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  try {
    if (run->parsed())
      return run_command(algos, problems, n, opts, out_path);
    return profile_command(in_path, profile_out, drop_all_fail);
  } catch (const cli::Failure &f) {
    return cli::exit_code_for(f.status);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kExitInternal;
  }
}
