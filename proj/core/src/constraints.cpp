#include "fairdiv/constraints.hpp"

#include <cmath>
#include <limits>

namespace fairdiv {

namespace {

void require_positive(const MeanMatrix& mu) {
  for (int i = 0; i < mu.rows(); ++i)
    for (int k = 0; k < mu.cols(); ++k) {
      double v = mu(i, k);
      if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError("build_constraints: mu entries must be finite and positive (entry (" +
                              std::to_string(i) + "," + std::to_string(k) + ") = " +
                              std::to_string(v) + ")");
    }
}

std::string efe_label(int i, int j) {
  return "efe:" + std::to_string(i + 1) + "->" + std::to_string(j + 1);
}

}  // namespace

ConstraintSet build_constraints(Family family, const MeanMatrix& mu) {
  require_positive(mu);
  const int n = mu.rows();
  const int m = mu.cols();
  ConstraintSet set;
  set.family = family;
  set.source_mu = mu;

  if (family == Family::Efe) {
    // Ordered pairs i != i'. The paper's index scheme over [n^2] also emits
    // vacuous self-pairs; those are dropped here.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        LinearConstraint con;
        con.B = Matrix(n, m);
        for (int k = 0; k < m; ++k) {
          con.B(i, k) = mu(i, k);
          con.B(j, k) = -mu(i, k);
        }
        con.c = 0.0;
        con.owner_row = i;
        con.involved = {std::min(i, j), std::max(i, j)};
        con.label = efe_label(i, j);
        set.constraints.push_back(std::move(con));
      }
  } else {
    for (int l = 0; l < n; ++l) {
      LinearConstraint con;
      con.B = Matrix(n, m);
      for (int k = 0; k < m; ++k) {
        for (int i = 0; i < n; ++i)
          con.B(i, k) = (i == l ? (n - 1.0) / n : -1.0 / n) * mu(l, k);
      }
      con.c = 0.0;
      con.owner_row = l;
      con.involved.resize(n);
      for (int i = 0; i < n; ++i) con.involved[i] = i;
      con.label = "pe:" + std::to_string(l + 1);
      set.constraints.push_back(std::move(con));
    }
  }
  return set;
}

double constraint_slack(const LinearConstraint& con, const FractionalAllocation& x) {
  return frobenius_product(con.B, x) - con.c;
}

SatisfactionReport all_satisfied(const ConstraintSet& set, const FractionalAllocation& x,
                                 double tol) {
  if (tol < 0.0) throw ValidationError("all_satisfied: tol must be >= 0");
  SatisfactionReport rep;
  rep.ok = true;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& con : set.constraints) {
    double s = constraint_slack(con, x);
    if (s < worst) {
      worst = s;
      rep.worst_label = con.label;
      rep.worst_slack = s;
    }
  }
  if (!set.constraints.empty() && worst < -tol) rep.ok = false;
  return rep;
}

MeanMatrix transform_means_for_distribution(const MeanMatrix& mu, const std::vector<double>& d) {
  const int m = mu.cols();
  if (static_cast<int>(d.size()) != m)
    throw ValidationError("transform_means_for_distribution: distribution length != m");
  double sum = 0.0;
  for (double p : d) {
    if (p < 0.0) throw ValidationError("transform_means_for_distribution: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("transform_means_for_distribution: distribution must sum to 1");
  MeanMatrix out = mu;
  for (int i = 0; i < mu.rows(); ++i)
    for (int k = 0; k < m; ++k) out(i, k) = m * d[k] * mu(i, k);
  return out;
}

}  // namespace fairdiv
