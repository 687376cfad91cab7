#include "fairdiv/bandit.hpp"

#include <algorithm>
#include <cmath>

#include "fairdiv/rng.hpp"

namespace fairdiv {

namespace {

// Stream salts for the environment's independent generators.
constexpr uint64_t kItemStream = 0x11;
constexpr uint64_t kRecipientStream = 0x22;
constexpr uint64_t kValueStream = 0x33;

double draw_value(Rng& rng, ValueModelSpec model, double mean) {
  switch (model.type) {
    case ValueModel::Gaussian:
      return rng.gaussian(mean, 1.0);
    case ValueModel::Bernoulli:
      return rng.uniform() < mean ? 1.0 : 0.0;
    case ValueModel::BoundedUniform:
      return rng.uniform(mean - model.half_width, mean + model.half_width);
  }
  return mean;
}

}  // namespace

std::string to_string(ValueModel m) {
  switch (m) {
    case ValueModel::Gaussian: return "gaussian";
    case ValueModel::Bernoulli: return "bernoulli";
    case ValueModel::BoundedUniform: return "bounded_uniform";
  }
  return "?";
}

ValueModel value_model_from_string(const std::string& s) {
  if (s == "gaussian") return ValueModel::Gaussian;
  if (s == "bernoulli") return ValueModel::Bernoulli;
  if (s == "bounded_uniform") return ValueModel::BoundedUniform;
  throw ValidationError("unknown value model '" + s + "'");
}

void Environment::validate() const {
  spec.validate();
  if (true_means.rows() != spec.n || true_means.cols() != spec.m)
    throw ValidationError("environment: true_means shape must be n x m");
  for (int i = 0; i < spec.n; ++i)
    for (int k = 0; k < spec.m; ++k) {
      double v = true_means(i, k);
      if (v < spec.a || v > spec.b)
        throw ValidationError("environment: true mean (" + std::to_string(i) + "," +
                              std::to_string(k) + ") outside [a,b]");
    }
  if (values.type == ValueModel::Bernoulli && (spec.a <= 0.0 || spec.b >= 1.0))
    throw ValidationError("environment: bernoulli values require [a,b] within (0,1)");
  if (values.type == ValueModel::BoundedUniform && values.half_width < 0.0)
    throw ValidationError("environment: bounded_uniform half-width must be >= 0");
}

long long etc_warmup_length(long long T) {
  if (T < 1) throw ValidationError("etc_warmup_length: T must be >= 1");
  // Smallest integer w with w^3 >= T^2, i.e. ceil(T^{2/3}).
  long long w = static_cast<long long>(std::ceil(std::pow(static_cast<double>(T), 2.0 / 3.0)));
  w = std::max<long long>(w, 1);
  auto cube = [](long long v) { return v * v * v; };
  const long long t2 = T * T;
  while (cube(w) < t2) ++w;
  while (w > 1 && cube(w - 1) >= t2) --w;
  return std::min(w, T);
}

ConfidenceBox EstimateState::box(double a, double b) const {
  ConfidenceBox box;
  box.center = mu_hat;
  box.radius = eps;
  box.floor_a = a;
  box.ceil_b = b;
  return box;
}

EstimateState estimate_means(const std::vector<Observation>& history, long long T,
                             const ProblemSpec& spec) {
  EstimateState st;
  st.n = spec.n;
  st.m = spec.m;
  st.counts.assign(static_cast<size_t>(spec.n) * spec.m, 0);
  st.sums = Matrix(spec.n, spec.m);
  st.mu_hat = Matrix(spec.n, spec.m);
  st.eps = Matrix(spec.n, spec.m);
  for (const auto& ob : history) {
    st.counts[static_cast<size_t>(ob.i) * spec.m + ob.k] += 1;
    st.sums(ob.i, ob.k) += ob.value;
  }
  const double log_term = std::log(4.0 * static_cast<double>(T) * spec.n * spec.m);
  for (int i = 0; i < spec.n; ++i)
    for (int k = 0; k < spec.m; ++k) {
      long long c = st.count(i, k);
      if (c == 0) {
        // Unseen cell: midpoint estimate, effective interval [a, b].
        st.mu_hat(i, k) = 0.5 * (spec.a + spec.b);
        st.eps(i, k) = std::numeric_limits<double>::infinity();
      } else {
        double mean = st.sums(i, k) / static_cast<double>(c);
        st.mu_hat(i, k) = std::clamp(mean, spec.a, spec.b);
        st.eps(i, k) = std::sqrt(log_term * log_term / (2.0 * static_cast<double>(c)));
      }
    }
  return st;
}

EtcPolicy::EtcPolicy(const ProblemSpec& spec, Family family)
    : spec_(spec), family_(family), warmup_(etc_warmup_length(spec.T)),
      uar_(make_uar(spec.n, spec.m)) {}

void EtcPolicy::override_estimate(const MeanMatrix& mu_hat, const Matrix& eps) {
  has_override_ = true;
  override_mu_ = mu_hat;
  override_eps_ = eps;
}

void EtcPolicy::commit() {
  EstimateState st = estimate_means(history_, spec_.T, spec_);
  if (has_override_) {
    st.mu_hat = override_mu_;
    st.eps = override_eps_;
  }
  box_ = st.box(spec_.a, spec_.b);
  auto solved = solve_robust_fair(box_, family_);
  committed_x_ = solved.allocation;
  committed_ = true;
  history_.clear();
  history_.shrink_to_fit();
}

const FractionalAllocation& EtcPolicy::next_allocation(long long t) {
  if (t < warmup_) return uar_;
  if (!committed_) commit();
  return committed_x_;
}

void EtcPolicy::observe(long long t, int k, int i, double value) {
  if (t < warmup_) history_.push_back({t, k, i, value});
}

const FractionalAllocation* EtcPolicy::committed_allocation() const {
  return committed_ ? &committed_x_ : nullptr;
}

const ConfidenceBox* EtcPolicy::commit_box() const { return committed_ ? &box_ : nullptr; }

OraclePolicy::OraclePolicy(const MeanMatrix& mu_star, Family family)
    : y_(solve_optimal_fair(mu_star, family).allocation) {}

GreedyUnfairPolicy::GreedyUnfairPolicy(const ProblemSpec& spec)
    : spec_(spec), warmup_(etc_warmup_length(spec.T)), uar_(make_uar(spec.n, spec.m)) {}

const FractionalAllocation& GreedyUnfairPolicy::next_allocation(long long t) {
  if (t < warmup_) return uar_;
  if (!committed_) {
    EstimateState st = estimate_means(history_, spec_.T, spec_);
    committed_x_ = Matrix(spec_.n, spec_.m);
    for (int k = 0; k < spec_.m; ++k) {
      int best = 0;
      for (int i = 1; i < spec_.n; ++i)
        if (st.mu_hat(i, k) > st.mu_hat(best, k)) best = i;
      committed_x_(best, k) = 1.0;
    }
    committed_ = true;
    history_.clear();
  }
  return committed_x_;
}

void GreedyUnfairPolicy::observe(long long t, int k, int i, double value) {
  if (t < warmup_) history_.push_back({t, k, i, value});
}

const FractionalAllocation* GreedyUnfairPolicy::committed_allocation() const {
  return committed_ ? &committed_x_ : nullptr;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const Environment& env) {
  if (name == "etc") return std::make_unique<EtcPolicy>(env.spec, env.spec.family);
  if (name == "oracle") return std::make_unique<OraclePolicy>(env.true_means, env.spec.family);
  if (name == "uar") return std::make_unique<UarPolicy>(env.spec.n, env.spec.m);
  if (name == "greedy_unfair") return std::make_unique<GreedyUnfairPolicy>(env.spec);
  throw ValidationError("unknown policy '" + name + "'");
}

EpisodeTrace run_episode(const Environment& env, Policy& policy, long long T, uint64_t seed) {
  env.validate();
  const int n = env.spec.n;
  const int m = env.spec.m;

  const uint64_t episode_key = env.base_seed * 0x9e3779b97f4a7c15ULL + seed;
  Rng item_rng = Rng::stream(episode_key, kItemStream);
  Rng pick_rng = Rng::stream(episode_key, kRecipientStream);
  Rng value_rng = Rng::stream(episode_key, kValueStream);

  EpisodeTrace trace;
  trace.T = T;
  trace.n = n;
  trace.m = m;
  trace.seed = seed;
  trace.item_type.reserve(T);
  trace.recipient.reserve(T);
  trace.observed.reserve(T);
  trace.hidden.reserve(static_cast<size_t>(T) * n);
  trace.phase.reserve(T);
  trace.expected_sw.reserve(T);
  trace.envy_series.reserve(T);
  trace.prop_gap_series.reserve(T);

  // Running ledger: bundle_value[viewer][holder] = V_viewer(A_holder).
  Matrix bundle_value(n, n);

  for (long long t = 0; t < T; ++t) {
    const FractionalAllocation& x = policy.next_allocation(t);
    auto check = validate_allocation(x, kFeasTol);
    if (!check.ok)
      throw InvariantError("run_episode: policy '" + policy.name() +
                           "' returned an invalid allocation at t=" + std::to_string(t) + ": " +
                           check.to_string());

    int k = item_rng.categorical(env.spec.item_distribution.data(), m);

    // Inverse-CDF draw from column k of X_t.
    double xi = pick_rng.uniform();
    int recipient = n - 1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += x(i, k);
      if (xi < acc) {
        recipient = i;
        break;
      }
    }

    for (int i = 0; i < n; ++i)
      trace.hidden.push_back(draw_value(value_rng, env.values, env.true_means(i, k)));
    const double* values = &trace.hidden[static_cast<size_t>(t) * n];
    double observed = values[recipient];

    policy.observe(t, k, recipient, observed);

    trace.item_type.push_back(k);
    trace.recipient.push_back(recipient);
    trace.observed.push_back(observed);
    trace.phase.push_back(policy.in_warmup(t) ? 0 : 1);
    trace.expected_sw.push_back(frobenius_product(x, env.true_means));

    for (int viewer = 0; viewer < n; ++viewer)
      bundle_value(viewer, recipient) += values[viewer];
    double envy = 0.0, gap = 0.0;
    for (int viewer = 0; viewer < n; ++viewer) {
      double own = bundle_value(viewer, viewer);
      double avg = 0.0;
      for (int holder = 0; holder < n; ++holder) {
        envy = std::max(envy, bundle_value(viewer, holder) - own);
        avg += bundle_value(viewer, holder);
      }
      gap = std::max(gap, avg / n - own);
    }
    trace.envy_series.push_back(envy);
    trace.prop_gap_series.push_back(gap);
  }

  if (const auto* committed = policy.committed_allocation()) {
    trace.has_commit = true;
    trace.committed = *committed;
  }
  if (const auto* box = policy.commit_box()) {
    trace.has_box = true;
    trace.box = *box;
  }
  return trace;
}

RegretSeries expected_regret(const EpisodeTrace& trace, const MeanMatrix& mu_star, Family family) {
  RegretSeries out;
  out.optimal_value = solve_optimal_fair(mu_star, family).value;
  out.per_step.reserve(trace.expected_sw.size());
  for (double sw : trace.expected_sw) {
    double r = out.optimal_value - sw;
    out.per_step.push_back(r);
    out.cumulative += r;
  }
  return out;
}

namespace {

Matrix bundle_values_at(const EpisodeTrace& trace, long long tau) {
  if (tau < 0 || tau > trace.T) throw ValidationError("realized metric: tau outside [0, T]");
  Matrix bundle(trace.n, trace.n);
  for (long long t = 0; t < tau; ++t) {
    int holder = trace.recipient[t];
    for (int viewer = 0; viewer < trace.n; ++viewer)
      bundle(viewer, holder) += trace.hidden_value(t, viewer);
  }
  return bundle;
}

}  // namespace

double realized_envy(const EpisodeTrace& trace, long long tau) {
  Matrix bundle = bundle_values_at(trace, tau);
  double envy = 0.0;  // the max includes i = i', so never negative
  for (int viewer = 0; viewer < trace.n; ++viewer)
    for (int holder = 0; holder < trace.n; ++holder)
      envy = std::max(envy, bundle(viewer, holder) - bundle(viewer, viewer));
  return envy;
}

double realized_prop_gap(const EpisodeTrace& trace, long long tau) {
  Matrix bundle = bundle_values_at(trace, tau);
  double gap = 0.0;
  for (int viewer = 0; viewer < trace.n; ++viewer) {
    double avg = 0.0;
    for (int holder = 0; holder < trace.n; ++holder) avg += bundle(viewer, holder);
    gap = std::max(gap, avg / trace.n - bundle(viewer, viewer));
  }
  return gap;
}

}  // namespace fairdiv
