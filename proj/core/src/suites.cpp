#include "fairdiv/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "fairdiv/constraints.hpp"
#include "fairdiv/lp.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/rng.hpp"
#include "fairdiv/transform.hpp"

namespace fairdiv {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

MeanMatrix random_mu(Rng& rng, int n, int m, double a, double b) {
  Matrix mu(n, m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) mu(i, k) = rng.uniform(a, b);
  return mu;
}

void note_failure(SuiteResult& res, const std::string& msg) {
  ++res.failures;
  if (res.messages.size() < 8) res.messages.push_back(msg);
}

}  // namespace

std::string SuiteResult::line() const {
  std::string s = name + ": " + (pass ? "PASS" : "FAIL") + " (" + std::to_string(instances) +
                  " instances, " + std::to_string(failures) + " failures";
  if (clamp_events > 0) s += ", " + std::to_string(clamp_events) + " clamp events";
  char buf[32];
  std::snprintf(buf, sizeof buf, ", %.1fs)", seconds);
  s += buf;
  return s;
}

SuiteResult run_prop_transform_suite(int instances, uint64_t seed) {
  Stopwatch clock;
  SuiteResult res;
  res.name = "prop-transform";
  res.instances = instances;
  Rng rng = Rng::stream(seed, 0x501);
  for (int t = 0; t < instances; ++t) {
    int n = 2 + static_cast<int>(rng.below(4));
    int m = 2 + static_cast<int>(rng.below(4));
    double a = 1.0;
    double b = rng.uniform(1.0, 5.0);
    MeanMatrix mu = random_mu(rng, n, m, a, b);
    double gamma = rng.uniform(1e-3, 0.5);
    try {
      auto y = solve_optimal_fair(mu, Family::Pe).allocation;
      auto rep = proportional_slack_transform(mu, y, gamma, a, b);
      res.clamp_events += rep.clamp_events;
      auto check = oracle::verify_property2(mu, y, rep.x_prime, rep.case1_uar ? 0.0 : gamma,
                                            Family::Pe);
      if (!check.pass)
        note_failure(res, "instance " + std::to_string(t) + ": " + check.failures.front());
      else if (check.welfare_loss > (b / a) * n * gamma + 1e-9)
        note_failure(res, "instance " + std::to_string(t) + ": welfare loss " +
                              std::to_string(check.welfare_loss) + " above (b/a) n gamma");
    } catch (const std::exception& e) {
      note_failure(res, "instance " + std::to_string(t) + ": " + e.what());
    }
  }
  res.pass = res.failures == 0;
  res.seconds = clock.seconds();
  return res;
}

SuiteResult run_efe_transform_suite(int instances, uint64_t seed) {
  Stopwatch clock;
  SuiteResult res;
  res.name = "efe-transform";
  res.instances = instances;
  Rng rng = Rng::stream(seed, 0x502);
  for (int t = 0; t < instances; ++t) {
    int n = 2 + static_cast<int>(rng.below(2));
    int m = 2 + static_cast<int>(rng.below(2));
    double a = 1.0;
    double b = rng.uniform(1.0, 3.0);
    MeanMatrix mu = random_mu(rng, n, m, a, b);
    double gamma0 = efe_gamma_upper_bound(n, a, b);
    double gamma = gamma0 * rng.uniform(0.1, 1.0);
    try {
      auto y = solve_optimal_fair(mu, Family::Efe).allocation;
      auto rep = efe_slack_transform(mu, y, gamma, a, b);
      res.clamp_events += rep.clamp_events;
      if (rep.iterations > n * n * n)
        note_failure(res, "instance " + std::to_string(t) + ": iterations " +
                              std::to_string(rep.iterations) + " above n^3");
      if (!oracle::definition_fair(mu, rep.x_prime, Family::Efe, 1e-9))
        note_failure(res, "instance " + std::to_string(t) + ": output not envy-free");
      auto check = oracle::verify_property2(mu, y, rep.x_prime, gamma, Family::Efe);
      if (!check.pass)
        note_failure(res, "instance " + std::to_string(t) + ": " + check.failures.front());
      else if (check.welfare_loss >
               std::pow(n, 4) * rep.alpha0 + 1e-9)
        note_failure(res, "instance " + std::to_string(t) + ": welfare loss " +
                              std::to_string(check.welfare_loss) + " above n^4 alpha0");
      for (int k = 0; k < m; ++k)
        if (std::abs(rep.x_prime.column_sum(k) - y.column_sum(k)) > 1e-12)
          note_failure(res, "instance " + std::to_string(t) + ": column " + std::to_string(k) +
                                " sum drifted by more than 1e-12");
    } catch (const std::exception& e) {
      note_failure(res, "instance " + std::to_string(t) + ": " + e.what());
    }
  }
  res.pass = res.failures == 0;
  res.seconds = clock.seconds();
  return res;
}

SuiteResult run_robust_lp_suite(int instances, uint64_t seed) {
  Stopwatch clock;
  SuiteResult res;
  res.name = "robust-lp-equivalence";
  res.instances = instances;
  Rng rng = Rng::stream(seed, 0x503);
  for (int t = 0; t < instances; ++t) {
    int n = 2 + static_cast<int>(rng.below(2));
    int m = 2 + static_cast<int>(rng.below(2));
    double a = 1.0;
    double b = rng.uniform(2.0, 4.0);
    Family family = rng.below(2) == 0 ? Family::Efe : Family::Pe;
    ConfidenceBox box;
    box.center = random_mu(rng, n, m, a, b);
    box.radius = Matrix(n, m);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k) box.radius(i, k) = rng.uniform(0.0, 1.0);
    box.floor_a = a;
    box.ceil_b = b;
    try {
      auto main_path = solve_robust_fair(box, family);
      auto witness = oracle::robust_lp_via_vertex_enumeration(box, family);
      if (std::abs(main_path.value - witness.value) > kObjTol)
        note_failure(res, "instance " + std::to_string(t) + ": values differ by " +
                              std::to_string(main_path.value - witness.value));
      auto set = build_constraints(family, box.center);
      for (const auto& con : set.constraints)
        if (robust_slack(family, con, main_path.allocation, box) < -kFeasTol) {
          note_failure(res, "instance " + std::to_string(t) + ": robust slack below -1e-9 for " +
                                con.label);
          break;
        }
    } catch (const std::exception& e) {
      note_failure(res, "instance " + std::to_string(t) + ": " + e.what());
    }
  }
  res.pass = res.failures == 0;
  res.seconds = clock.seconds();
  return res;
}

SuiteResult run_lp_grid_suite(int instances, uint64_t seed) {
  Stopwatch clock;
  SuiteResult res;
  res.name = "lp-vs-grid";
  res.instances = instances;
  Rng rng = Rng::stream(seed, 0x504);
  for (int t = 0; t < instances; ++t) {
    int n = 2 + static_cast<int>(rng.below(2));
    int m = 2 + static_cast<int>(rng.below(2));
    double a = 1.0;
    double b = rng.uniform(1.5, 4.0);
    Family family = rng.below(2) == 0 ? Family::Efe : Family::Pe;
    double resolution = (n == 3 && m == 3) ? 0.1 : 0.05;
    MeanMatrix mu = random_mu(rng, n, m, a, b);
    try {
      auto main_path = solve_optimal_fair(mu, family);
      auto witness = oracle::grid_search_optimal(mu, family, resolution);
      double budget = n * m * b * resolution;
      if (std::abs(main_path.value - witness.value) > budget + kObjTol)
        note_failure(res, "instance " + std::to_string(t) + ": gap " +
                              std::to_string(main_path.value - witness.value) +
                              " above grid error " + std::to_string(budget));
    } catch (const std::exception& e) {
      note_failure(res, "instance " + std::to_string(t) + ": " + e.what());
    }
  }
  res.pass = res.failures == 0;
  res.seconds = clock.seconds();
  return res;
}

}  // namespace fairdiv
