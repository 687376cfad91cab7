// Acceptance harness: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit code 0 when
// all pass, 2 otherwise.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "fairdiv/bandit.hpp"
#include "fairdiv/constraints.hpp"
#include "fairdiv/experiment.hpp"
#include "fairdiv/suites.hpp"

using namespace fairdiv;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <class F>
std::string parallel_for(int jobs, F&& body) {
  std::atomic<int> next{0};
  std::mutex mu;
  std::string error;
  int workers = std::min(worker_limit(), jobs);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int j = next.fetch_add(1);
        if (j >= jobs) return;
        try {
          body(j);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mu);
          if (error.empty()) error = e.what();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return error;
}

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

ProblemSpec make_spec(const MeanMatrix& mu, long long T, double a, double b) {
  ProblemSpec spec;
  spec.n = mu.rows();
  spec.m = mu.cols();
  spec.T = T;
  spec.a = a;
  spec.b = b;
  spec.family = Family::Efe;
  spec.item_distribution = ProblemSpec::uniform_distribution(mu.cols());
  return spec;
}

struct EtcRun {
  double cumulative_regret = 0.0;
  bool mu_in_box = false;
  bool commit_feasible_true = false;
  std::vector<double> envy_series;
};

EtcRun run_etc(const MeanMatrix& mu, double a, double b, long long T, uint64_t seed,
               ValueModelSpec values, double optimal_value, bool keep_envy) {
  Environment env;
  env.spec = make_spec(mu, T, a, b);
  env.true_means = mu;
  env.values = values;
  env.base_seed = 0;
  EtcPolicy policy(env.spec, Family::Efe);
  auto trace = run_episode(env, policy, T, seed);

  EtcRun out;
  for (double sw : trace.expected_sw) out.cumulative_regret += optimal_value - sw;
  if (trace.has_commit) {
    out.commit_feasible_true =
        all_satisfied(build_constraints(Family::Efe, mu), trace.committed, 1e-9).ok;
    if (trace.has_box) out.mu_in_box = trace.box.contains(mu);
  }
  if (keep_envy) out.envy_series = std::move(trace.envy_series);
  return out;
}

// Mean cumulative expected regret of ETC over `seeds` runs at each horizon.
std::vector<std::pair<double, double>> etc_regret_curve(const MeanMatrix& mu, double a, double b,
                                                        const std::vector<long long>& horizons,
                                                        int seeds, std::string* error) {
  double optimal = solve_optimal_fair(mu, Family::Efe).value;
  std::vector<std::pair<double, double>> points;
  for (long long T : horizons) {
    std::vector<double> regrets(seeds, 0.0);
    std::string err = parallel_for(seeds, [&](int s) {
      regrets[s] = run_etc(mu, a, b, T, 1000 + s, {ValueModel::Gaussian, 0.0}, optimal, false)
                       .cumulative_regret;
    });
    if (!err.empty()) {
      *error = err;
      return points;
    }
    double mean = 0.0;
    for (double r : regrets) mean += r;
    points.emplace_back(static_cast<double>(T), mean / seeds);
  }
  return points;
}

Criterion criterion_prop_transform() {
  Criterion c{"proportionality transform suite (500 instances)"};
  Stopwatch clock;
  auto res = run_prop_transform_suite(500, 0xACC1);
  c.seconds = clock.seconds();
  c.pass = res.pass && c.seconds < 60.0;
  c.detail = std::to_string(res.instances - res.failures) + "/" +
             std::to_string(res.instances) + " instances ok";
  if (!res.messages.empty()) c.detail += "; first failure: " + res.messages.front();
  return c;
}

Criterion criterion_efe_transform() {
  Criterion c{"envy slack transform suite (300 instances)"};
  Stopwatch clock;
  auto res = run_efe_transform_suite(300, 0xACC2);
  c.seconds = clock.seconds();
  c.pass = res.pass && c.seconds < 120.0;
  c.detail = std::to_string(res.instances - res.failures) + "/" +
             std::to_string(res.instances) + " instances ok, " +
             std::to_string(res.clamp_events) + " clamp events";
  if (!res.messages.empty()) c.detail += "; first failure: " + res.messages.front();
  return c;
}

Criterion criterion_robust_lp() {
  Criterion c{"robust LP equivalence (200 boxes)"};
  Stopwatch clock;
  auto res = run_robust_lp_suite(200, 0xACC3);
  c.seconds = clock.seconds();
  c.pass = res.pass && c.seconds < 60.0;
  c.detail = std::to_string(res.instances - res.failures) + "/" +
             std::to_string(res.instances) + " boxes matched within 1e-6";
  if (!res.messages.empty()) c.detail += "; first failure: " + res.messages.front();
  return c;
}

Criterion criterion_regret_scaling() {
  Criterion c{"regret scaling on mu*=[[3,3],[1,1]]"};
  Stopwatch clock;
  auto mu = Matrix::from_rows({{3, 3}, {1, 1}});
  std::string error;
  auto points = etc_regret_curve(mu, 1.0, 3.0, {4096, 16384, 65536, 262144}, 50, &error);
  c.seconds = clock.seconds();
  if (!error.empty()) {
    c.pass = false;
    c.detail = "runner failed: " + error;
    return c;
  }
  std::string series;
  for (auto [T, r] : points)
    series += " T=" + fmt(T, "%.0f") + ":" + fmt(r);
  try {
    auto fit = fit_regret_slope(points);
    c.pass = fit.slope >= 0.55 && fit.slope <= 0.85 && c.seconds < 600.0;
    c.detail = "slope " + fmt(fit.slope) + " +/- " + fmt(fit.stderr_) + " from" + series;
  } catch (const ValidationError& e) {
    c.pass = false;
    c.detail = std::string("slope unfittable (") + e.what() + ");" + series +
               "; every EFE-feasible allocation of this instance has welfare 4 = <UAR,mu*>, "
               "so expected regret is identically ~0";
  }
  return c;
}

// Same protocol on an instance whose constrained optimum strictly beats
// UAR, so the warm-up pays T^{2/3} regret. Reported for context, not gated.
Criterion supplementary_regret_scaling() {
  Criterion c{"supplementary regret scaling on mu*=[[2,1],[1,2]]"};
  Stopwatch clock;
  auto mu = Matrix::from_rows({{2, 1}, {1, 2}});
  std::string error;
  auto points = etc_regret_curve(mu, 1.0, 2.0, {4096, 16384, 65536, 262144}, 50, &error);
  c.seconds = clock.seconds();
  if (!error.empty()) {
    c.pass = false;
    c.detail = "runner failed: " + error;
    return c;
  }
  std::string series;
  for (auto [T, r] : points)
    series += " T=" + fmt(T, "%.0f") + ":" + fmt(r);
  try {
    auto fit = fit_regret_slope(points);
    c.pass = fit.slope >= 0.55 && fit.slope <= 0.85;
    c.detail = "slope " + fmt(fit.slope) + " +/- " + fmt(fit.stderr_) + " from" + series;
  } catch (const ValidationError& e) {
    c.pass = false;
    c.detail = std::string("slope unfittable (") + e.what() + ")";
  }
  return c;
}

Criterion criterion_safety() {
  Criterion c{"commit safety frequency (200 runs, T=4096)"};
  Stopwatch clock;
  auto mu = Matrix::from_rows({{3, 3}, {1, 1}});
  double optimal = solve_optimal_fair(mu, Family::Efe).value;
  const int runs = 200;
  std::vector<EtcRun> results(runs);
  std::string err = parallel_for(runs, [&](int s) {
    results[s] = run_etc(mu, 1.0, 3.0, 4096, 2000 + s, {ValueModel::Gaussian, 0.0}, optimal, false);
  });
  c.seconds = clock.seconds();
  if (!err.empty()) {
    c.pass = false;
    c.detail = "runner failed: " + err;
    return c;
  }
  int violations = 0, in_box = 0, in_box_violations = 0;
  for (const auto& r : results) {
    if (!r.commit_feasible_true) ++violations;
    if (r.mu_in_box) {
      ++in_box;
      if (!r.commit_feasible_true) ++in_box_violations;
    }
  }
  double fraction = static_cast<double>(violations) / runs;
  c.pass = fraction <= 0.05 && in_box_violations == 0 && c.seconds < 300.0;
  c.detail = std::to_string(violations) + "/" + std::to_string(runs) +
             " violating runs (fraction " + fmt(fraction) + " <= 0.05); mu* in box in " +
             std::to_string(in_box) + " runs with " + std::to_string(in_box_violations) +
             " violations among them";
  return c;
}

Criterion criterion_realized_envy() {
  Criterion c{"realized envy envelope (100 runs, T=4096)"};
  Stopwatch clock;
  auto mu = Matrix::from_rows({{3, 3}, {1, 1}});
  double optimal = solve_optimal_fair(mu, Family::Efe).value;
  const int runs = 100;
  const long long T = 4096;
  const double log_T = std::log(static_cast<double>(T));
  std::vector<int> clean(runs, 0);
  std::string err = parallel_for(runs, [&](int s) {
    auto r = run_etc(mu, 1.0, 3.0, T, 3000 + s, {ValueModel::BoundedUniform, 0.5}, optimal, true);
    bool ok = true;
    for (long long t = 0; t < T; ++t)
      if (r.envy_series[t] > std::sqrt(static_cast<double>(t + 1)) * log_T) {
        ok = false;
        break;
      }
    clean[s] = ok ? 1 : 0;
  });
  c.seconds = clock.seconds();
  if (!err.empty()) {
    c.pass = false;
    c.detail = "runner failed: " + err;
    return c;
  }
  int total_clean = 0;
  for (int ok : clean) total_clean += ok;
  c.pass = total_clean >= 95 && c.seconds < 300.0;
  c.detail = std::to_string(total_clean) + "/100 runs stayed below sqrt(tau) log T at every tau";
  return c;
}

Criterion criterion_lower_bound() {
  Criterion c{"lower-bound demo (T=100)"};
  Stopwatch clock;
  auto rep = demo_lower_bound(100);
  c.seconds = clock.seconds();
  bool coords = rep.coord_min >= 0.5 - 2e-3 && rep.coord_max <= 0.5 + 2e-3;
  bool gap = std::abs(rep.per_step_gap - 0.5) <= 0.01;
  c.pass = coords && gap && c.seconds < 10.0;
  c.detail = "coords in [" + fmt(rep.coord_min, "%.6f") + ", " + fmt(rep.coord_max, "%.6f") +
             "], per-step UAR gap " + fmt(rep.per_step_gap, "%.4f");
  return c;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

Criterion criterion_determinism() {
  Criterion c{"trace determinism"};
  Stopwatch clock;
  auto dir1 = fs::temp_directory_path() / "fairdiv_acc_det1";
  auto dir2 = fs::temp_directory_path() / "fairdiv_acc_det2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  auto config_text = [](const fs::path& dir) {
    return std::string(R"({"n":2,"m":2,"a":1.0,"b":3.0,"family":"efe",
      "mu_star":[[3,3],[1,1]],"value_model":{"type":"gaussian"},"policy":"etc",
      "T_grid":[64,128],"seeds":[3,4],"output_dir":")") +
           dir.string() + "\"}";
  };
  run_config(ExperimentConfig::from_json_text(config_text(dir1)));
  run_config(ExperimentConfig::from_json_text(config_text(dir2)));
  int compared = 0;
  bool identical = true;
  for (const char* name :
       {"trace_T64_seed3.csv", "trace_T64_seed4.csv", "trace_T128_seed3.csv",
        "trace_T128_seed4.csv"}) {
    auto a = slurp(dir1 / name);
    auto b = slurp(dir2 / name);
    identical = identical && !a.empty() && a == b;
    ++compared;
  }
  // And rerunning in place reproduces the same bytes.
  auto before = slurp(dir1 / "trace_T128_seed4.csv");
  run_config(ExperimentConfig::from_json_text(config_text(dir1)));
  identical = identical && slurp(dir1 / "trace_T128_seed4.csv") == before;
  c.seconds = clock.seconds();
  c.pass = identical;
  c.detail = std::to_string(compared) + " trace files byte-identical across reruns";
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(criterion_prop_transform());
  results.push_back(criterion_efe_transform());
  results.push_back(criterion_robust_lp());
  results.push_back(criterion_regret_scaling());
  results.push_back(criterion_safety());
  results.push_back(criterion_realized_envy());
  results.push_back(criterion_lower_bound());
  results.push_back(criterion_determinism());

  int passed = 0;
  for (size_t j = 0; j < results.size(); ++j) {
    const auto& c = results[j];
    passed += c.pass ? 1 : 0;
    std::printf("criterion %zu [%s]: %s — %s (%.1fs)\n", j + 1, c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.detail.c_str(), c.seconds);
  }
  auto extra = supplementary_regret_scaling();
  std::printf("info [%s]: %s — %s (%.1fs, not gated)\n", extra.name.c_str(),
              extra.pass ? "in window" : "out of window", extra.detail.c_str(), extra.seconds);
  std::printf("RESULT: %d/%zu criteria passed\n", passed, results.size());
  return passed == static_cast<int>(results.size()) ? 0 : 2;
}
