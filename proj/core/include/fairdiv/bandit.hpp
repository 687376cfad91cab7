#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fairdiv/core.hpp"
#include "fairdiv/lp.hpp"

namespace fairdiv {

enum class ValueModel { Gaussian, Bernoulli, BoundedUniform };

std::string to_string(ValueModel m);
ValueModel value_model_from_string(const std::string& s);

struct ValueModelSpec {
  ValueModel type = ValueModel::Gaussian;
  double half_width = 0.5;  // bounded_uniform only
};

// The online item stream: hidden true means plus a value model. Item-type
// draws, recipient draws and value draws use independent generator streams
// derived from (base_seed, episode seed).
struct Environment {
  ProblemSpec spec;
  MeanMatrix true_means;
  ValueModelSpec values;
  uint64_t base_seed = 0;

  void validate() const;
};

// What a policy is allowed to see: its own past assignments and the one
// revealed value per round. Hidden values never cross this interface.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual const FractionalAllocation& next_allocation(long long t) = 0;
  virtual void observe(long long t, int k, int i, double value) { (void)t, (void)k, (void)i, (void)value; }
  virtual bool in_warmup(long long t) const { (void)t; return false; }
  virtual std::string name() const = 0;
  // Commit-time artifacts, when the policy has them.
  virtual const FractionalAllocation* committed_allocation() const { return nullptr; }
  virtual const ConfidenceBox* commit_box() const { return nullptr; }
};

struct EpisodeTrace {
  long long T = 0;
  int n = 0, m = 0;
  uint64_t seed = 0;
  std::vector<int> item_type;           // k_t
  std::vector<int> recipient;           // i_t
  std::vector<double> observed;         // V_{i_t}(j_t)
  std::vector<double> hidden;           // T x n, hidden[t*n + i] = V_i(j_t)
  std::vector<uint8_t> phase;           // 0 = warmup, 1 = commit
  std::vector<double> expected_sw;      // <X_t, mu*>
  std::vector<double> envy_series;      // realized envy after step t
  std::vector<double> prop_gap_series;  // realized proportionality gap after step t

  bool has_commit = false;
  FractionalAllocation committed;
  bool has_box = false;
  ConfidenceBox box;

  double hidden_value(long long t, int i) const { return hidden[static_cast<size_t>(t) * n + i]; }
};

// One observed warm-up round.
struct Observation {
  long long t = 0;
  int k = 0;
  int i = 0;
  double value = 0.0;
};

// ceil(T^{2/3}) clamped to [1, T].
long long etc_warmup_length(long long T);

struct EstimateState {
  int n = 0, m = 0;
  std::vector<long long> counts;  // N_ik
  Matrix sums;
  MeanMatrix mu_hat;  // clamped into [a, b]; (a+b)/2 for unseen cells
  Matrix eps;         // sqrt(log^2(4Tnm) / (2 N_ik)); +inf for unseen cells

  long long count(int i, int k) const { return counts[static_cast<size_t>(i) * m + k]; }
  ConfidenceBox box(double a, double b) const;
};

// Per-cell sample means and confidence radii from warm-up observations.
EstimateState estimate_means(const std::vector<Observation>& history, long long T,
                             const ProblemSpec& spec);

// Fair Explore-Then-Commit: UAR for ceil(T^{2/3}) rounds, then one robust LP
// solve on the estimated confidence box, then the committed allocation for
// the rest of the horizon.
class EtcPolicy : public Policy {
 public:
  EtcPolicy(const ProblemSpec& spec, Family family);
  const FractionalAllocation& next_allocation(long long t) override;
  void observe(long long t, int k, int i, double value) override;
  bool in_warmup(long long t) const override { return t < warmup_ && !committed_; }
  std::string name() const override { return "etc"; }
  const FractionalAllocation* committed_allocation() const override;
  const ConfidenceBox* commit_box() const override;

  // Test hook: replaces the estimate used at commit time.
  void override_estimate(const MeanMatrix& mu_hat, const Matrix& eps);

 private:
  void commit();

  ProblemSpec spec_;
  Family family_;
  long long warmup_;
  std::vector<Observation> history_;
  FractionalAllocation uar_;
  FractionalAllocation committed_x_;
  ConfidenceBox box_;
  bool committed_ = false;
  bool has_override_ = false;
  MeanMatrix override_mu_;
  Matrix override_eps_;
};

// Plays the known-means optimum Y^{mu*} every round.
class OraclePolicy : public Policy {
 public:
  OraclePolicy(const MeanMatrix& mu_star, Family family);
  const FractionalAllocation& next_allocation(long long) override { return y_; }
  std::string name() const override { return "oracle"; }
  const FractionalAllocation* committed_allocation() const override { return &y_; }

 private:
  FractionalAllocation y_;
};

class UarPolicy : public Policy {
 public:
  UarPolicy(int n, int m) : uar_(make_uar(n, m)) {}
  const FractionalAllocation& next_allocation(long long) override { return uar_; }
  std::string name() const override { return "uar"; }
  const FractionalAllocation* committed_allocation() const override { return &uar_; }

 private:
  FractionalAllocation uar_;
};

// Fairness-blind baseline: explores like ETC, then hands each item type to
// the player with the highest estimated mean for it.
class GreedyUnfairPolicy : public Policy {
 public:
  GreedyUnfairPolicy(const ProblemSpec& spec);
  const FractionalAllocation& next_allocation(long long t) override;
  void observe(long long t, int k, int i, double value) override;
  bool in_warmup(long long t) const override { return t < warmup_ && !committed_; }
  std::string name() const override { return "greedy_unfair"; }
  const FractionalAllocation* committed_allocation() const override;

 private:
  ProblemSpec spec_;
  long long warmup_;
  std::vector<Observation> history_;
  FractionalAllocation uar_;
  FractionalAllocation committed_x_;
  bool committed_ = false;
};

std::unique_ptr<Policy> make_policy(const std::string& name, const Environment& env);

// Executes T rounds of the online loop: draw k_t, ask the policy for X_t,
// draw the recipient from column k_t, draw all hidden values, reveal only
// the recipient's value. Deterministic given (env.base_seed, seed, policy).
EpisodeTrace run_episode(const Environment& env, Policy& policy, long long T, uint64_t seed);

struct RegretSeries {
  std::vector<double> per_step;  // <Y^{mu*}, mu*> - <X_t, mu*>
  double cumulative = 0.0;
  double optimal_value = 0.0;
};

RegretSeries expected_regret(const EpisodeTrace& trace, const MeanMatrix& mu_star, Family family);

// Realized fairness at time tau, recomputed from the trace's hidden value
// ledger (independent of the incrementally maintained series).
double realized_envy(const EpisodeTrace& trace, long long tau);
double realized_prop_gap(const EpisodeTrace& trace, long long tau);

}  // namespace fairdiv
