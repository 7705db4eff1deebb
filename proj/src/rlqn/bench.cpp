//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "rlqn/errors.hpp"

namespace rlqn {

namespace {
  std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = text.find(sep, start);
      parts.push_back(text.substr(start, pos - start));
      if (pos == std::string_view::npos)
        break;
      start = pos + 1;
    }
    return parts;
  }

  std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
      s.remove_prefix(1);
    while (!s.empty()
           && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }

  std::string format_double(double v) {
    if (std::isnan(v))
      return "nan";
    if (std::isinf(v))
      return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  bool parse_int(std::string_view s, std::int64_t &out) {
    const auto *end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
  }

  bool parse_double(std::string_view s, double &out) {
    if (s.empty())
      return false;
    const std::string tmp(s);
    char *end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size();
  }
}  // namespace

std::string ProblemSpec::label() const {
  if (param == 0.0)
    return name;
  char buf[48];
  std::snprintf(buf, sizeof buf, "(%g)", param);
  return name + buf;
}

std::vector<ProblemSpec> parse_problem_list(std::string_view list,
                                            Index default_n) {
  list = trim(list);
  std::vector<ProblemSpec> out;
  if (list == "all") {
    for (const std::string &name: problem_names())
      out.push_back({name, default_n, 0.0});
    return out;
  }
  for (std::string_view item: split(list, ',')) {
    item = trim(item);
    if (item.empty())
      continue;
    const auto fields = split(item, ':');
    if (fields.size() > 3)
      throw ConfigError("bad problem entry: " + std::string(item));

    ProblemSpec spec;
    spec.name = std::string(fields[0]);
    const auto &names = problem_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end())
      throw UnknownProblem(spec.name);

    spec.n = default_n;
    if (fields.size() >= 2) {
      std::int64_t n = 0;
      if (!parse_int(fields[1], n) || n <= 0)
        throw ConfigError("bad dimension in problem entry: "
                          + std::string(item));
      spec.n = n;
    }
    if (fields.size() == 3 && !parse_double(fields[2], spec.param))
      throw ConfigError("bad parameter in problem entry: " + std::string(item));
    out.push_back(spec);
  }
  if (out.empty())
    throw ConfigError("empty problem list");
  return out;
}

std::vector<std::string> parse_algo_list(std::string_view list) {
  list = trim(list);
  std::vector<std::string> out;
  if (list == "all") {
    for (const AlgoSpec &a: algorithms())
      out.push_back(a.name);
    return out;
  }
  for (std::string_view item: split(list, ',')) {
    item = trim(item);
    if (item.empty())
      continue;
    out.push_back(find_algorithm(item).name);
  }
  if (out.empty())
    throw UnknownAlgo("(empty list)");
  return out;
}

ResultRow make_row(const ProblemSpec &problem, const std::string &algo,
                   const RunReport &report, double wall_ms) {
  ResultRow row;
  row.problem = problem.label();
  row.n = problem.n;
  row.algo = algo;
  row.status = std::string(status_name(report.status));
  row.fevals = report.fevals;
  row.gevals = report.gevals;
  row.iters = report.iters;
  row.accepted_ratio = report.accepted_ratio();
  row.final_g_inf = report.final_g_inf;
  row.final_f = report.final_f;
  row.wall_ms = wall_ms;
  return row;
}

std::vector<ResultRow> run_suite(const std::vector<std::string> &algos,
                                 const std::vector<ProblemSpec> &problems,
                                 const SuiteOptions &options) {
  if (algos.empty())
    throw UnknownAlgo("(empty list)");
  if (problems.empty())
    throw ConfigError("empty problem list");
  options.cfg.validate();

  std::vector<const AlgoSpec *> specs;
  for (const std::string &a: algos)
    specs.push_back(&find_algorithm(a));
  for (const ProblemSpec &p: problems)
    make_problem(p.name, p.n, p.param);

  struct Task {
    const AlgoSpec *algo;
    const ProblemSpec *problem;
  };
  std::vector<Task> tasks;
  for (const ProblemSpec &p: problems)
    for (const AlgoSpec *a: specs)
      tasks.push_back({a, &p});

  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next {0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size())
        return;
      try {
        const Task &t = tasks[i];
        auto problem = make_problem(t.problem->name, t.problem->n,
                                    t.problem->param);
        const auto start = std::chrono::steady_clock::now();
        const RunReport report = run_algorithm(*t.algo, *problem, options.cfg);
        const std::chrono::duration<double, std::milli> elapsed
            = std::chrono::steady_clock::now() - start;
        rows[i] = make_row(*t.problem, t.algo->name, report, elapsed.count());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = tasks.size();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads,
                                                static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto &th: pool)
      th.join();
  }
  if (failure)
    std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
    return std::tie(a.problem, a.n, a.algo) < std::tie(b.problem, b.n, b.algo);
  });
  return rows;
}

void write_results_csv(std::ostream &out, const std::vector<ResultRow> &rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow &r: rows) {
    if (r.problem.find(',') != std::string::npos
        || r.algo.find(',') != std::string::npos)
      throw std::invalid_argument("result fields must not contain commas");
    out << r.problem << ',' << r.n << ',' << r.algo << ',' << r.status << ','
        << r.fevals << ',' << r.gevals << ',' << r.iters << ','
        << format_double(r.accepted_ratio) << ','
        << format_double(r.final_g_inf) << ',' << format_double(r.final_f)
        << ',' << format_double(r.wall_ms) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream &in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string &what) {
    throw std::runtime_error("results CSV line " + std::to_string(lineno)
                             + ": " + what);
  };

  if (!std::getline(in, line))
    throw std::runtime_error("results CSV is empty");
  ++lineno;
  if (trim(line) != kResultsHeader)
    fail("unexpected header");

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty())
      continue;
    const auto f = split(text, ',');
    if (f.size() != 11)
      fail("expected 11 fields");
    ResultRow r;
    r.problem = std::string(f[0]);
    r.algo = std::string(f[2]);
    r.status = std::string(f[3]);
    if (!parse_int(f[1], r.n) || !parse_int(f[4], r.fevals)
        || !parse_int(f[5], r.gevals) || !parse_int(f[6], r.iters))
      fail("bad integer field");
    if (!parse_double(f[7], r.accepted_ratio)
        || !parse_double(f[8], r.final_g_inf) || !parse_double(f[9], r.final_f)
        || !parse_double(f[10], r.wall_ms))
      fail("bad numeric field");
    try {
      parse_status(r.status);
    } catch (const std::invalid_argument &) {
      fail("unknown status " + r.status);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

double ProfileCurve::rho_at(double tau) const {
  double rho = 0.0;
  for (const ProfilePoint &p: points) {
    if (p.tau <= tau)
      rho = p.rho;
    else
      break;
  }
  return rho;
}

std::vector<ProfileCurve> perf_profile(const std::vector<ResultRow> &rows,
                                       bool drop_all_fail) {
  using Key = std::pair<std::string, std::int64_t>;
  std::map<Key, std::map<std::string, const ResultRow *>> by_problem;
  std::set<std::string> algos;
  for (const ResultRow &r: rows) {
    auto &slot = by_problem[{r.problem, r.n}][r.algo];
    if (slot != nullptr)
      throw DuplicateRow("duplicate result for " + r.problem + " n="
                         + std::to_string(r.n) + " algo=" + r.algo);
    slot = &r;
    algos.insert(r.algo);
  }

  const double inf = std::numeric_limits<double>::infinity();
  // ratios[algo] holds one entry per counted problem
  std::map<std::string, std::vector<double>> ratios;
  std::size_t counted = 0;
  double max_finite = 1.0;
  for (const auto &[key, entries]: by_problem) {
    double best = inf;
    for (const auto &[algo, row]: entries) {
      if (row->converged())
        best = std::min(best, static_cast<double>(row->fevals));
    }
    if (best == inf && drop_all_fail)
      continue;
    ++counted;
    for (const std::string &algo: algos) {
      const auto it = entries.find(algo);
      double r = inf;
      if (it != entries.end() && it->second->converged() && best > 0.0)
        r = static_cast<double>(it->second->fevals) / best;
      ratios[algo].push_back(r);
      if (std::isfinite(r))
        max_finite = std::max(max_finite, r);
    }
  }

  std::vector<ProfileCurve> curves;
  if (counted == 0) {
    for (const std::string &algo: algos)
      curves.push_back({algo, {}});
    return curves;
  }

  std::set<double> taus {1.0, 2.0 * max_finite};
  for (const auto &[algo, rs]: ratios)
    for (double r: rs)
      if (std::isfinite(r))
        taus.insert(r);

  for (const std::string &algo: algos) {
    ProfileCurve curve {algo, {}};
    const auto &rs = ratios[algo];
    for (double tau: taus) {
      const auto hits = std::count_if(rs.begin(), rs.end(),
                                      [tau](double r) { return r <= tau; });
      curve.points.push_back(
          {tau, static_cast<double>(hits) / static_cast<double>(counted)});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_profile_csv(std::ostream &out,
                       const std::vector<ProfileCurve> &curves) {
  out << kProfileHeader << '\n';
  for (const ProfileCurve &c: curves)
    for (const ProfilePoint &p: c.points)
      out << c.algo << ',' << format_double(p.tau) << ','
          << format_double(p.rho) << '\n';
}

std::vector<AcceptanceSummary>
acceptance_summary(const std::vector<ResultRow> &rows) {
  std::map<std::string, AcceptanceSummary> acc;
  for (const ResultRow &r: rows) {
    AcceptanceSummary &s = acc[r.algo];
    s.algo = r.algo;
    s.mean_accepted_ratio += r.accepted_ratio;
    ++s.rows;
    if (r.converged())
      ++s.converged;
  }
  std::vector<AcceptanceSummary> out;
  for (auto &[algo, s]: acc) {
    s.mean_accepted_ratio /= static_cast<double>(s.rows);
    out.push_back(s);
  }
  return out;
}

}  // namespace rlqn
