#include "fairdiv/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fairdiv/constraints.hpp"
#include "fairdiv/rng.hpp"

namespace fairdiv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// Write-temp-then-rename so readers never observe a partial file.
void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cannot write " + tmp.string());
    os << content;
  }
  fs::rename(tmp, path);
}

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw ValidationError("config." + field + ": " + what);
}

Matrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) config_error(field, "expected a 2-D array");
  Matrix m(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(j[i].size()) != m.cols()) config_error(field, "ragged rows");
    for (int k = 0; k < m.cols(); ++k) {
      if (!j[i][k].is_number()) config_error(field, "non-numeric entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  return from_json_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  auto need = [&](const char* field) -> const json& {
    if (!j.contains(field)) config_error(field, "missing");
    return j.at(field);
  };
  c.n = need("n").get<int>();
  c.m = need("m").get<int>();
  c.a = need("a").get<double>();
  c.b = need("b").get<double>();
  c.family = family_from_string(need("family").get<std::string>());
  if (j.contains("item_distribution"))
    c.item_distribution = j["item_distribution"].get<std::vector<double>>();

  const json& mu = need("mu_star");
  if (mu.is_array()) {
    c.mu.explicit_mu = parse_matrix(mu, "mu_star");
  } else if (mu.is_object() && mu.contains("random_seed")) {
    c.mu.random = true;
    c.mu.random_seed = mu["random_seed"].get<uint64_t>();
  } else {
    config_error("mu_star", "expected a matrix or {\"random_seed\": <int>}");
  }

  if (j.contains("value_model")) {
    const json& vm = j["value_model"];
    if (!vm.is_object() || !vm.contains("type")) config_error("value_model", "expected {\"type\": ...}");
    c.values.type = value_model_from_string(vm["type"].get<std::string>());
    if (vm.contains("half_width")) c.values.half_width = vm["half_width"].get<double>();
  }
  c.policy = need("policy").get<std::string>();
  c.T_grid = need("T_grid").get<std::vector<long long>>();
  c.seeds = need("seeds").get<std::vector<uint64_t>>();
  c.output_dir = need("output_dir").get<std::string>();
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (n < 2 || n > kMaxDim) config_error("n", "must be in [2, " + std::to_string(kMaxDim) + "]");
  if (m < 1 || m > kMaxDim) config_error("m", "must be in [1, " + std::to_string(kMaxDim) + "]");
  if (!(a > 0.0)) config_error("a", "must be > 0");
  if (!(b >= a)) config_error("b", "must be >= a");
  if (!item_distribution.empty()) {
    if (static_cast<int>(item_distribution.size()) != m)
      config_error("item_distribution", "length must equal m");
    double sum = 0.0;
    for (double p : item_distribution) {
      if (p < 0.0) config_error("item_distribution", "entries must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) config_error("item_distribution", "must sum to 1");
  }
  if (!mu.random) {
    if (mu.explicit_mu.rows() != n || mu.explicit_mu.cols() != m)
      config_error("mu_star", "shape must be n x m");
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k)
        if (mu.explicit_mu(i, k) < a || mu.explicit_mu(i, k) > b)
          config_error("mu_star", "entry (" + std::to_string(i) + "," + std::to_string(k) +
                                      ") outside [a, b]");
  }
  if (policy != "etc" && policy != "oracle" && policy != "uar" && policy != "greedy_unfair")
    config_error("policy", "unknown policy '" + policy + "'");
  if (T_grid.empty()) config_error("T_grid", "must be nonempty");
  for (long long T : T_grid)
    if (T < 1) config_error("T_grid", "horizons must be >= 1");
  if (seeds.empty()) config_error("seeds", "must be nonempty");
  if (output_dir.empty()) config_error("output_dir", "must be set");
}

ProblemSpec ExperimentConfig::spec_for(long long T) const {
  ProblemSpec s;
  s.n = n;
  s.m = m;
  s.T = T;
  s.a = a;
  s.b = b;
  s.family = family;
  s.item_distribution =
      item_distribution.empty() ? ProblemSpec::uniform_distribution(m) : item_distribution;
  return s;
}

MeanMatrix ExperimentConfig::resolve_mu() const {
  if (!mu.random) return mu.explicit_mu;
  Rng rng = Rng::stream(mu.random_seed, 0x6d75);  // "mu"
  Matrix out(n, m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) out(i, k) = rng.uniform(a, b);
  return out;
}

int worker_limit() {
  if (const char* env = std::getenv("FAIRDIV_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

const char* const kTraceCsvHeader =
    "t,k,i,value,phase,expected_sw,per_step_regret,realized_envy,realized_prop_gap";

void write_trace_csv(const std::string& path, const EpisodeTrace& trace,
                     const RegretSeries& regret) {
  std::string out;
  out.reserve(static_cast<size_t>(trace.T) * 64 + 128);
  out += "# seed=" + std::to_string(trace.seed) + "\n";
  out += kTraceCsvHeader;
  out += '\n';
  for (long long t = 0; t < trace.T; ++t) {
    out += std::to_string(t);
    out += ',';
    out += std::to_string(trace.item_type[t]);
    out += ',';
    out += std::to_string(trace.recipient[t]);
    out += ',';
    out += fmt(trace.observed[t]);
    out += ',';
    out += trace.phase[t] == 0 ? "warmup" : "commit";
    out += ',';
    out += fmt(trace.expected_sw[t]);
    out += ',';
    out += fmt(regret.per_step[t]);
    out += ',';
    out += fmt(trace.envy_series[t]);
    out += ',';
    out += fmt(trace.prop_gap_series[t]);
    out += '\n';
  }
  atomic_write(path, out);
}

SlopeFit fit_regret_slope(const std::vector<std::pair<double, double>>& points) {
  SlopeFit fit;
  std::vector<std::pair<double, double>> logs;
  for (auto [T, regret] : points) {
    if (!(T > 0.0)) throw ValidationError("fit_regret_slope: nonpositive horizon");
    if (!(regret > 0.0)) {
      fit.warnings.push_back("excluded nonpositive regret " + fmt(regret) + " at T=" + fmt(T));
      continue;
    }
    logs.emplace_back(std::log(T), std::log(regret));
  }
  if (logs.size() < 3)
    throw ValidationError("fit_regret_slope: need >= 3 positive points, have " +
                          std::to_string(logs.size()));
  double n = static_cast<double>(logs.size());
  double sx = 0, sy = 0;
  for (auto [x, y] : logs) {
    sx += x;
    sy += y;
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0)) throw ValidationError("fit_regret_slope: degenerate horizons");
  fit.slope = sxy / sxx;
  double ssr = 0;
  for (auto [x, y] : logs) {
    double r = y - (my + fit.slope * (x - mx));
    ssr += r * r;
  }
  fit.points_used = static_cast<int>(logs.size());
  fit.stderr_ = logs.size() > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return fit;
}

namespace {

struct Job {
  long long T;
  uint64_t seed;
};

RunResult execute_job(const ExperimentConfig& config, const MeanMatrix& mu_star,
                      double optimal_value, const Job& job) {
  auto start = std::chrono::steady_clock::now();
  Environment env;
  env.spec = config.spec_for(job.T);
  env.true_means = mu_star;
  env.values = config.values;
  env.base_seed = 0;

  auto policy = make_policy(config.policy, env);
  EpisodeTrace trace = run_episode(env, *policy, job.T, job.seed);

  RegretSeries regret;
  regret.optimal_value = optimal_value;
  regret.per_step.reserve(trace.expected_sw.size());
  for (double sw : trace.expected_sw) {
    double r = optimal_value - sw;
    regret.per_step.push_back(r);
    regret.cumulative += r;
  }

  RunResult res;
  res.T = job.T;
  res.seed = job.seed;
  res.cumulative_regret = regret.cumulative;
  for (double e : trace.envy_series) res.max_realized_envy = std::max(res.max_realized_envy, e);
  for (double g : trace.prop_gap_series)
    res.max_realized_prop_gap = std::max(res.max_realized_prop_gap, g);

  if (trace.has_commit) {
    res.has_commit = true;
    auto set = build_constraints(config.family, mu_star);
    res.commit_feasible_true = all_satisfied(set, trace.committed, kFeasTol).ok;
    if (trace.has_box) {
      res.mu_in_box = trace.box.contains(mu_star);
      if (res.mu_in_box && !res.commit_feasible_true)
        throw InvariantError("run_config: mu* in box but committed allocation violates the true "
                             "constraints (T=" + std::to_string(job.T) +
                             " seed=" + std::to_string(job.seed) + ")");
    }
  }

  res.trace_file = "trace_T" + std::to_string(job.T) + "_seed" + std::to_string(job.seed) + ".csv";
  write_trace_csv((fs::path(config.output_dir) / res.trace_file).string(), trace, regret);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace

SummaryReport run_config(const ExperimentConfig& config) {
  config.validate();
  auto start = std::chrono::steady_clock::now();
  MeanMatrix mu_star = config.resolve_mu();
  for (int i = 0; i < config.n; ++i)
    for (int k = 0; k < config.m; ++k)
      if (mu_star(i, k) < config.a || mu_star(i, k) > config.b)
        throw ValidationError("config.mu_star: resolved means leave [a, b]");

  fs::create_directories(config.output_dir);
  double optimal_value = solve_optimal_fair(mu_star, config.family).value;

  std::vector<Job> jobs;
  for (long long T : config.T_grid)
    for (uint64_t seed : config.seeds) jobs.push_back({T, seed});

  SummaryReport summary;
  summary.optimal_value = optimal_value;
  summary.runs.resize(jobs.size());
  std::vector<std::string> written;
  written.reserve(jobs.size());

  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mu;
  int workers = std::min<int>(worker_limit(), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        size_t j = next.fetch_add(1);
        if (j >= jobs.size() || failed.load()) return;
        try {
          summary.runs[j] = execute_job(config, mu_star, optimal_value, jobs[j]);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failed.exchange(true)) failure = e.what();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();

  if (failed.load()) {
    // Remove whatever this invocation managed to write.
    for (const auto& run : summary.runs)
      if (!run.trace_file.empty()) {
        std::error_code ec;
        fs::remove(fs::path(config.output_dir) / run.trace_file, ec);
      }
    throw ValidationError("run_config: " + failure);
  }

  // Mean cumulative regret per horizon, for the slope fit.
  std::vector<long long> distinct_T = config.T_grid;
  std::sort(distinct_T.begin(), distinct_T.end());
  distinct_T.erase(std::unique(distinct_T.begin(), distinct_T.end()), distinct_T.end());
  if (distinct_T.size() >= 3) {
    std::vector<std::pair<double, double>> points;
    for (long long T : distinct_T) {
      double sum = 0.0;
      int count = 0;
      for (const auto& run : summary.runs)
        if (run.T == T) {
          sum += run.cumulative_regret;
          ++count;
        }
      points.emplace_back(static_cast<double>(T), sum / count);
    }
    try {
      summary.slope = fit_regret_slope(points);
    } catch (const ValidationError&) {
      // Not enough positive points; the summary simply omits the fit.
    }
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json j;
  j["policy"] = config.policy;
  j["family"] = to_string(config.family);
  j["optimal_value"] = summary.optimal_value;
  j["runs"] = json::array();
  for (const auto& run : summary.runs) {
    json r;
    r["T"] = run.T;
    r["seed"] = run.seed;
    r["cumulative_regret"] = run.cumulative_regret;
    r["max_realized_envy"] = run.max_realized_envy;
    r["max_realized_prop_gap"] = run.max_realized_prop_gap;
    r["trace"] = run.trace_file;
    r["wall_seconds"] = run.wall_seconds;
    if (run.has_commit) {
      r["mu_in_box"] = run.mu_in_box;
      r["commit_satisfies_true_constraints"] = run.commit_feasible_true;
    }
    j["runs"].push_back(std::move(r));
  }
  if (summary.slope) {
    j["slope"] = {{"value", summary.slope->slope},
                  {"stderr", summary.slope->stderr_},
                  {"points", summary.slope->points_used}};
  }
  j["wall_seconds"] = summary.wall_seconds;
  atomic_write(fs::path(config.output_dir) / "summary.json", j.dump(2) + "\n");
  return summary;
}

std::string LowerBoundReport::to_json() const {
  json j;
  j["T"] = T;
  j["coord_min"] = coord_min;
  j["coord_max"] = coord_max;
  j["y_mu2"] = json::array();
  for (int i = 0; i < y_mu2.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < y_mu2.cols(); ++k) row.push_back(y_mu2(i, k));
    j["y_mu2"].push_back(std::move(row));
  }
  j["y_mu2_value"] = y_mu2_value;
  j["uar_value"] = uar_value;
  j["per_step_gap"] = per_step_gap;
  return j.dump(2);
}

LowerBoundReport demo_lower_bound(long long T) {
  if (T < 2) throw ValidationError("demo_lower_bound: T must be >= 2");
  const double surrogate = 1e-9;  // stands in for the construction's exact zeros
  const double tiny = 1.0 / (static_cast<double>(T) * T);
  MeanMatrix mu1 = Matrix::from_rows({{tiny, surrogate}, {1.0, 0.5}});
  MeanMatrix mu2 = Matrix::from_rows({{surrogate, tiny}, {1.0, 0.5}});

  auto set1 = build_constraints(Family::Efe, mu1);
  auto set2 = build_constraints(Family::Efe, mu2);

  // Max/min each coordinate subject to both EFE families at once.
  StandardLP base;
  base.objective.assign(4, 0.0);
  base.lower.assign(4, 0.0);
  for (int k = 0; k < 2; ++k) {
    std::vector<double> row(4, 0.0);
    row[k] = 1.0;      // X_1k
    row[2 + k] = 1.0;  // X_2k
    base.add_row(std::move(row), RowSense::Eq, 1.0);
  }
  for (const auto* set : {&set1, &set2})
    for (const auto& con : set->constraints) base.add_row(con.B.data(), RowSense::Ge, con.c);

  LowerBoundReport rep;
  rep.T = T;
  rep.coord_min = std::numeric_limits<double>::infinity();
  rep.coord_max = -std::numeric_limits<double>::infinity();
  for (int var = 0; var < 4; ++var) {
    for (double sign : {1.0, -1.0}) {
      StandardLP lp = base;
      lp.objective[var] = sign;
      auto sol = solve_lp(lp);
      if (sol.status != SolveStatus::Optimal)
        throw InvariantError("demo_lower_bound: coordinate LP reported " + to_string(sol.status));
      rep.coord_min = std::min(rep.coord_min, sol.x[var]);
      rep.coord_max = std::max(rep.coord_max, sol.x[var]);
    }
  }

  auto best2 = solve_optimal_fair(mu2, Family::Efe);
  rep.y_mu2 = best2.allocation;
  rep.y_mu2_value = best2.value;
  rep.uar_value = frobenius_product(make_uar(2, 2), mu2);
  rep.per_step_gap = rep.y_mu2_value - rep.uar_value;
  return rep;
}

}  // namespace fairdiv
