#pragma once

#include <string>
#include <vector>

#include "fairdiv/core.hpp"

namespace fairdiv {

// Brute-force witnesses used to cross-check the LP and transform paths.
// Fairness here is evaluated straight from the definitions (own value vs.
// other players' rows), sharing no code with the constraints module.
namespace oracle {

struct OracleReport {
  bool pass = false;
  double oracle_value = 0.0;
  double main_value = 0.0;
  double gap = 0.0;  // |oracle - main|, computed, never inferred
  std::string digest;
};

// FNV-1a over the raw bytes of the instance, for report correlation.
std::string instance_digest(const std::vector<const Matrix*>& parts);

struct GridSearchResult {
  FractionalAllocation best;
  double value = 0.0;
  long long candidates = 0;
};

// Exhaustive search over column-stochastic matrices whose columns live on
// the simplex lattice with the given resolution. Feasibility is accepted up
// to the lattice rounding error 2*m*b*resolution so that near-binding
// optima are not excluded by quantization. Guaranteed within an additive
// n*m*b*resolution of the true optimum.
GridSearchResult grid_search_optimal(const MeanMatrix& mu, Family family, double resolution);

// Definition-level fairness check used by the oracles.
bool definition_fair(const MeanMatrix& mu, const FractionalAllocation& x, Family family,
                     double tol);

struct VertexLpResult {
  FractionalAllocation x;
  double value = 0.0;
  int rows = 0;
};

// Solves one LP containing, for each fairness constraint, its instantiation
// at every vertex of the owner-row sub-box (2^m rows per constraint). Exact
// for box uncertainty because each constraint is linear in its owner row.
VertexLpResult robust_lp_via_vertex_enumeration(const ConfidenceBox& box, Family family);

struct Property2Check {
  bool pass = false;
  std::vector<std::string> failures;  // offending constraints, if any
  double welfare_loss = 0.0;
};

// Independently verifies the slack-or-equal-rows disjunction for every
// constraint and recomputes the welfare loss of X' against Y.
Property2Check verify_property2(const MeanMatrix& mu, const FractionalAllocation& y,
                                const FractionalAllocation& x_prime, double gamma, Family family);

}  // namespace oracle
}  // namespace fairdiv
