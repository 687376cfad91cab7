#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairdiv/core.hpp"

namespace fairdiv {

// Randomized cross-check suites shared by the CLI `verify` command and the
// acceptance harness. Each suite draws its own instances from `seed` and
// reports per-instance failures.
struct SuiteResult {
  std::string name;
  bool pass = false;
  int instances = 0;
  int failures = 0;
  int clamp_events = 0;  // transform suites only
  std::vector<std::string> messages;
  double seconds = 0.0;

  std::string line() const;
};

// Proportionality transform on random PE instances: slack >= gamma or UAR,
// welfare loss within (b/a) n gamma, verified by the oracle.
SuiteResult run_prop_transform_suite(int instances, uint64_t seed);

// Envy slack transform on random EFE instances: iteration budget, output
// envy-freeness, the slack-or-equal-rows disjunction, welfare-loss bound
// n^4 alpha0, and exact column sums.
SuiteResult run_efe_transform_suite(int instances, uint64_t seed);

// Robust LP vs. owner-row vertex enumeration on random boxes, both
// families: optimal values within 1e-6 and all robust slacks >= -1e-9.
SuiteResult run_robust_lp_suite(int instances, uint64_t seed);

// LP (1) vs. lattice grid search on random instances: values within the
// additive grid error n*m*b*resolution.
SuiteResult run_lp_grid_suite(int instances, uint64_t seed);

}  // namespace fairdiv
