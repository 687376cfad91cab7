#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "fairdiv/constraints.hpp"
#include "fairdiv/core.hpp"

namespace fairdiv {

enum class RowSense { Le, Ge, Eq };

struct LinearRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
  RowSense sense = RowSense::Le;
};

// A generic LP in the form: maximize objective . x subject to the rows and
// per-variable bounds. Lower bounds must be finite; upper bounds may be
// +infinity.
struct StandardLP {
  std::vector<double> objective;
  std::vector<LinearRow> rows;
  std::vector<double> lower;  // default 0
  std::vector<double> upper;  // default +inf
  std::vector<std::string> names;

  int num_vars() const { return static_cast<int>(objective.size()); }
  void add_row(std::vector<double> coeffs, RowSense sense, double rhs);
  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericFailure };

std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::NumericFailure;
  std::vector<double> x;    // primal solution in original variables
  double objective = 0.0;
  long pivots = 0;
  std::vector<double> aux;  // epigraph variable values (robust LP only)
};

// Dense two-phase simplex with Bland's anti-cycling rule; entering variable
// is the lowest eligible index and ratio-test ties break toward the lowest
// basic variable index, so identical inputs give identical output.
SolveReport solve_lp(const StandardLP& prog);

// Dumps `prog` in plain-text LP format for cross-checking with external
// solvers.
void write_lp_format(const StandardLP& prog, std::ostream& os);

struct FairSolveResult {
  FractionalAllocation allocation;
  double value = 0.0;
  SolveReport report;
};

StandardLP assemble_optimal_fair_lp(const MeanMatrix& mu, Family family);
StandardLP assemble_robust_fair_lp(const ConfidenceBox& box, Family family);

// LP (1): maximize <X, mu> over column-stochastic X subject to
// build_constraints(family, mu). Never infeasible (UAR is always feasible);
// an infeasible status is reported as an InvariantError.
FairSolveResult solve_optimal_fair(const MeanMatrix& mu, Family family);

// LP (2): maximize <X, box.center> over column-stochastic X subject to
// <B_l(mu), X> >= 0 for every mu in the clamped box. The semi-infinite
// constraint set is reformulated exactly: each constraint's worst case over
// the box is sum_k mid_k * g_k - hw_k * |g_k| with g the owner-row
// allocation differences, and |g| is linearized with epigraph variables.
FairSolveResult solve_robust_fair(const ConfidenceBox& box, Family family);

// min over mu in the clamped box of <B_l(mu), X>, computed entrywise: the
// worst mean entry is the interval low end where the allocation difference
// g is >= 0 and the high end otherwise.
double robust_slack(Family family, const LinearConstraint& con, const FractionalAllocation& x,
                    const ConfidenceBox& box);

}  // namespace fairdiv
