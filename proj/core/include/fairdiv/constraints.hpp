#pragma once

#include <string>
#include <vector>

#include "fairdiv/core.hpp"

namespace fairdiv {

// One linear fairness constraint <B, X> >= c. Every nonzero entry of B is a
// scaled copy of row `owner_row` of the generating mean matrix; rows outside
// `involved` are all-zero. c is always 0 for both families.
struct LinearConstraint {
  Matrix B;
  double c = 0.0;
  int owner_row = 0;          // player index i(l) whose mean row generates B
  std::vector<int> involved;  // players with nonzero rows in B, sorted
  std::string label;          // "efe:i->i'" or "pe:i", 1-based
};

struct ConstraintSet {
  Family family = Family::Efe;
  MeanMatrix source_mu;
  std::vector<LinearConstraint> constraints;
};

// Builds the EFE or PE constraint family for mu. EFE yields one constraint
// per ordered pair i != i' (n(n-1) total): row i of B is mu_i, row i' is
// -mu_i. PE yields one constraint per player l (n total): row l of B is
// ((n-1)/n) mu_l and every other row is -(1/n) mu_l. Rejects nonpositive mu
// entries (the model assumes means bounded away from zero).
ConstraintSet build_constraints(Family family, const MeanMatrix& mu);

// <B, X> - c.
double constraint_slack(const LinearConstraint& con, const FractionalAllocation& x);

struct SatisfactionReport {
  bool ok = false;
  std::string worst_label;
  double worst_slack = 0.0;
};

// ok iff the minimum slack over the set is >= -tol; reports the minimizing
// constraint either way.
SatisfactionReport all_satisfied(const ConstraintSet& set, const FractionalAllocation& x,
                                 double tol);

// Rescales means for a non-uniform item-type distribution D so the welfare
// and fairness algebra match the uniform case: mu'_ik = m * D_k * mu_ik.
// Uniform D is the identity transform.
MeanMatrix transform_means_for_distribution(const MeanMatrix& mu, const std::vector<double>& d);

}  // namespace fairdiv
