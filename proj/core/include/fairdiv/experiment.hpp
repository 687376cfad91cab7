#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairdiv/bandit.hpp"
#include "fairdiv/core.hpp"

namespace fairdiv {

// Where the true means come from: an explicit matrix or a uniform draw from
// [a, b]^{n x m} with its own seed.
struct MuSource {
  bool random = false;
  Matrix explicit_mu;
  uint64_t random_seed = 0;
};

struct ExperimentConfig {
  int n = 0, m = 0;
  double a = 0.0, b = 0.0;
  Family family = Family::Efe;
  std::vector<double> item_distribution;  // empty = uniform
  MuSource mu;
  ValueModelSpec values;
  std::string policy = "etc";
  std::vector<long long> T_grid;
  std::vector<uint64_t> seeds;
  std::string output_dir;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
  ProblemSpec spec_for(long long T) const;
  MeanMatrix resolve_mu() const;
  void validate() const;
};

struct RunResult {
  long long T = 0;
  uint64_t seed = 0;
  double cumulative_regret = 0.0;
  double max_realized_envy = 0.0;
  double max_realized_prop_gap = 0.0;
  bool has_commit = false;
  bool mu_in_box = false;               // true mu* inside the clamped box
  bool commit_feasible_true = false;    // committed X satisfies mu* constraints
  double wall_seconds = 0.0;
  std::string trace_file;
};

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  int points_used = 0;
  std::vector<std::string> warnings;
};

// OLS on (log T, log regret). Nonpositive regret values are excluded with a
// warning; fewer than 3 surviving points is an error.
SlopeFit fit_regret_slope(const std::vector<std::pair<double, double>>& points);

struct SummaryReport {
  double optimal_value = 0.0;
  std::vector<RunResult> runs;
  std::optional<SlopeFit> slope;
  double wall_seconds = 0.0;
};

// Executes all (T, seed) runs of the config in parallel (worker count capped
// by FAIRDIV_THREADS), writes one trace CSV per run plus summary.json into
// output_dir, and returns the summary. Outputs are written atomically;
// partial outputs are removed if a run fails.
SummaryReport run_config(const ExperimentConfig& config);

// Worker cap: FAIRDIV_THREADS if set, else hardware concurrency.
int worker_limit();

// Fixed trace CSV schema (order matters; golden-file tested).
extern const char* const kTraceCsvHeader;

void write_trace_csv(const std::string& path, const EpisodeTrace& trace,
                     const RegretSeries& regret);

struct LowerBoundReport {
  long long T = 0;
  double coord_min = 0.0;       // smallest coordinate value over both-EFE-feasible X
  double coord_max = 0.0;       // largest
  Matrix y_mu2;                 // welfare-optimal fair allocation under mu^2
  double y_mu2_value = 0.0;
  double uar_value = 0.0;       // <UAR, mu^2>
  double per_step_gap = 0.0;    // y_mu2_value - uar_value
  std::string to_json() const;
};

// The two-instance construction showing that means arbitrarily close to
// zero force linear regret: with mu^1 and mu^2 indistinguishable in T
// rounds, the only allocation fair for both is UAR, which pays a constant
// welfare gap per step under mu^2. Zero entries use a 1e-9 surrogate.
LowerBoundReport demo_lower_bound(long long T);

}  // namespace fairdiv
