#include "fairdiv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace fairdiv {

namespace {

constexpr double kEps = 1e-9;        // reduced-cost threshold
constexpr double kPivTol = 1e-7;     // smallest acceptable pivot element
constexpr double kZeroTol = 1e-11;   // elimination cleanup
constexpr double kBlowup = 1e13;     // condition blow-up guard
constexpr long kPivotCap = 200000;

// Dense tableau in equality form A y = b, y >= 0, b >= 0.
class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0) {
    basis_.assign(rows, -1);
  }

  double& at(int r, int j) { return a_[static_cast<size_t>(r) * (cols_ + 1) + j]; }
  double at(int r, int j) const { return a_[static_cast<size_t>(r) * (cols_ + 1) + j]; }
  // Reduced-cost row lives at index rows_.
  double& z(int j) { return at(rows_, j); }
  double z(int j) const { return at(rows_, j); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int rhs() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int s) {
    double inv = 1.0 / at(r, s);
    for (int j = 0; j <= cols_; ++j) at(r, j) *= inv;
    at(r, s) = 1.0;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double f = at(i, s);
      if (std::abs(f) <= kZeroTol) {
        at(i, s) = 0.0;
        continue;
      }
      for (int j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, s) = 0.0;
    }
    basis_[r] = s;
  }

  bool blown_up() const {
    for (double v : a_)
      if (!std::isfinite(v) || std::abs(v) > kBlowup) return true;
    return false;
  }

 private:
  int rows_, cols_;
  std::vector<double> a_;
  std::vector<int> basis_;
};

enum class LoopResult { Optimal, Unbounded, Numeric };

// Bland's rule: entering = lowest-index eligible column, leaving = min
// ratio with ties broken by lowest basic variable index.
LoopResult simplex_loop(Tableau& t, int allowed_cols, long& pivots) {
  for (;;) {
    int s = -1;
    for (int j = 0; j < allowed_cols; ++j) {
      if (t.z(j) < -kEps) {
        s = j;
        break;
      }
    }
    if (s < 0) return LoopResult::Optimal;

    int r = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < t.rows(); ++i) {
      double a = t.at(i, s);
      if (a <= kPivTol) continue;
      double ratio = t.at(i, t.rhs()) / a;
      if (r < 0 || ratio < best_ratio - kZeroTol ||
          (std::abs(ratio - best_ratio) <= kZeroTol && t.basis()[i] < t.basis()[r])) {
        r = i;
        best_ratio = ratio;
      }
    }
    if (r < 0) return LoopResult::Unbounded;

    t.pivot(r, s);
    if (++pivots > kPivotCap || t.blown_up()) return LoopResult::Numeric;
  }
}

}  // namespace

void StandardLP::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  LinearRow row;
  row.coeffs = std::move(coeffs);
  row.sense = sense;
  row.rhs = rhs;
  rows.push_back(std::move(row));
}

void StandardLP::validate() const {
  const size_t n = objective.size();
  if (n == 0) throw ValidationError("lp: no variables");
  for (double c : objective)
    if (!std::isfinite(c)) throw ValidationError("lp: non-finite objective coefficient");
  if (!lower.empty() && lower.size() != n) throw ValidationError("lp: lower bound size mismatch");
  if (!upper.empty() && upper.size() != n) throw ValidationError("lp: upper bound size mismatch");
  for (size_t j = 0; j < lower.size(); ++j)
    if (!std::isfinite(lower[j])) throw ValidationError("lp: lower bounds must be finite");
  for (size_t j = 0; j < upper.size(); ++j) {
    double hi = upper[j];
    double lo = lower.empty() ? 0.0 : lower[j];
    if (std::isnan(hi) || hi < lo) throw ValidationError("lp: inconsistent bounds");
  }
  for (const auto& row : rows) {
    if (row.coeffs.size() != n) throw ValidationError("lp: row size mismatch");
    if (!std::isfinite(row.rhs)) throw ValidationError("lp: non-finite rhs");
    for (double c : row.coeffs)
      if (!std::isfinite(c)) throw ValidationError("lp: non-finite row coefficient");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericFailure: return "numeric_failure";
  }
  return "?";
}

SolveReport solve_lp(const StandardLP& prog) {
  prog.validate();
  const int nvars = prog.num_vars();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> lo(nvars, 0.0), hi(nvars, inf);
  for (int j = 0; j < nvars && j < static_cast<int>(prog.lower.size()); ++j) lo[j] = prog.lower[j];
  for (int j = 0; j < nvars && j < static_cast<int>(prog.upper.size()); ++j) hi[j] = prog.upper[j];

  // Shift variables to y = x - lo >= 0. Finite upper bounds become rows.
  struct WorkRow {
    std::vector<double> coeffs;
    double rhs;
    RowSense sense;
  };
  std::vector<WorkRow> work;
  work.reserve(prog.rows.size());
  for (const auto& row : prog.rows) {
    WorkRow w{row.coeffs, row.rhs, row.sense};
    for (int j = 0; j < nvars; ++j) w.rhs -= row.coeffs[j] * lo[j];
    work.push_back(std::move(w));
  }
  for (int j = 0; j < nvars; ++j) {
    if (hi[j] < inf) {
      WorkRow w{std::vector<double>(nvars, 0.0), hi[j] - lo[j], RowSense::Le};
      w.coeffs[j] = 1.0;
      work.push_back(std::move(w));
    }
  }
  // Normalize rhs >= 0.
  for (auto& w : work) {
    if (w.rhs < 0.0) {
      for (auto& c : w.coeffs) c = -c;
      w.rhs = -w.rhs;
      if (w.sense == RowSense::Le)
        w.sense = RowSense::Ge;
      else if (w.sense == RowSense::Ge)
        w.sense = RowSense::Le;
    }
  }

  const int nrows = static_cast<int>(work.size());
  int nslack = 0;
  for (const auto& w : work)
    if (w.sense != RowSense::Eq) ++nslack;
  int nart = 0;
  for (const auto& w : work)
    if (w.sense != RowSense::Le) ++nart;

  const int slack_base = nvars;
  const int art_base = nvars + nslack;
  const int total = nvars + nslack + nart;

  Tableau t(nrows, total);
  int slack_idx = slack_base, art_idx = art_base;
  for (int r = 0; r < nrows; ++r) {
    const auto& w = work[r];
    for (int j = 0; j < nvars; ++j) t.at(r, j) = w.coeffs[j];
    t.at(r, t.rhs()) = w.rhs;
    if (w.sense == RowSense::Le) {
      t.at(r, slack_idx) = 1.0;
      t.basis()[r] = slack_idx++;
    } else if (w.sense == RowSense::Ge) {
      t.at(r, slack_idx) = -1.0;
      ++slack_idx;
      t.at(r, art_idx) = 1.0;
      t.basis()[r] = art_idx++;
    } else {
      t.at(r, art_idx) = 1.0;
      t.basis()[r] = art_idx++;
    }
  }

  SolveReport rep;
  rep.pivots = 0;

  // Phase 1: maximize -sum(artificials). Reduced costs start at +1 on the
  // artificial columns; price out the initial basic artificials.
  if (nart > 0) {
    for (int j = art_base; j < total; ++j) t.z(j) = 1.0;
    for (int r = 0; r < nrows; ++r) {
      if (t.basis()[r] >= art_base) {
        for (int j = 0; j <= t.rhs(); ++j) t.z(j) -= t.at(r, j);
      }
    }
    LoopResult res = simplex_loop(t, total, rep.pivots);
    if (res == LoopResult::Numeric) {
      rep.status = SolveStatus::NumericFailure;
      return rep;
    }
    // res == Unbounded cannot happen: phase-1 objective is bounded above by 0.
    if (t.z(t.rhs()) < -1e-7) {
      rep.status = SolveStatus::Infeasible;
      return rep;
    }
    // Drive remaining artificials out of the basis where possible. Rows
    // that stay artificial are redundant (all-zero over real columns) and
    // inert for the rest of the solve.
    for (int r = 0; r < nrows; ++r) {
      if (t.basis()[r] < art_base) continue;
      int s = -1;
      for (int j = 0; j < art_base; ++j) {
        if (std::abs(t.at(r, j)) > kPivTol) {
          s = j;
          break;
        }
      }
      if (s >= 0) {
        t.pivot(r, s);
        ++rep.pivots;
      }
    }
  }

  // Phase 2: rebuild the reduced-cost row for the real objective.
  for (int j = 0; j <= t.rhs(); ++j) t.z(j) = 0.0;
  for (int j = 0; j < nvars; ++j) t.z(j) = -prog.objective[j];
  for (int r = 0; r < nrows; ++r) {
    int bj = t.basis()[r];
    if (bj < nvars && prog.objective[bj] != 0.0) {
      double c = prog.objective[bj];
      for (int j = 0; j <= t.rhs(); ++j) t.z(j) += c * t.at(r, j);
    }
  }
  LoopResult res = simplex_loop(t, art_base, rep.pivots);
  if (res == LoopResult::Numeric) {
    rep.status = SolveStatus::NumericFailure;
    return rep;
  }
  if (res == LoopResult::Unbounded) {
    rep.status = SolveStatus::Unbounded;
    return rep;
  }

  rep.status = SolveStatus::Optimal;
  rep.x.assign(nvars, 0.0);
  for (int r = 0; r < nrows; ++r) {
    int bj = t.basis()[r];
    if (bj < nvars) rep.x[bj] = t.at(r, t.rhs());
  }
  for (int j = 0; j < nvars; ++j) rep.x[j] += lo[j];
  rep.objective = 0.0;
  for (int j = 0; j < nvars; ++j) rep.objective += prog.objective[j] * rep.x[j];
  return rep;
}

void write_lp_format(const StandardLP& prog, std::ostream& os) {
  auto name = [&](int j) {
    if (j < static_cast<int>(prog.names.size()) && !prog.names[j].empty()) return prog.names[j];
    return "x" + std::to_string(j);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto terms = [&](const std::vector<double>& coeffs) {
    std::string s;
    bool first = true;
    for (size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] == 0.0) continue;
      if (first) {
        s += (coeffs[j] < 0 ? "- " : "");
        first = false;
      } else {
        s += (coeffs[j] < 0 ? " - " : " + ");
      }
      s += num(std::abs(coeffs[j])) + " " + name(static_cast<int>(j));
    }
    if (first) s = "0 " + name(0);
    return s;
  };

  os << "Maximize\n obj: " << terms(prog.objective) << "\nSubject To\n";
  for (size_t r = 0; r < prog.rows.size(); ++r) {
    const auto& row = prog.rows[r];
    const char* rel = row.sense == RowSense::Le ? "<=" : row.sense == RowSense::Ge ? ">=" : "=";
    os << " r" << r << ": " << terms(row.coeffs) << " " << rel << " " << num(row.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < prog.num_vars(); ++j) {
    double lo = j < static_cast<int>(prog.lower.size()) ? prog.lower[j] : 0.0;
    bool has_hi = j < static_cast<int>(prog.upper.size()) &&
                  prog.upper[j] < std::numeric_limits<double>::infinity();
    if (has_hi)
      os << " " << num(lo) << " <= " << name(j) << " <= " << num(prog.upper[j]) << "\n";
    else
      os << " " << name(j) << " >= " << num(lo) << "\n";
  }
  os << "End\n";
}

namespace {

// Allocation-difference coefficients g for one constraint: the robust slack
// of constraint l is sum_k mu_{owner,k} * g_k with g depending only on X.
// EFE pair (i,i'):  g_k = X_ik - X_i'k.
// PE player l:      g_k = X_lk - (1/n) sum_i X_ik.
double g_value(Family family, const LinearConstraint& con, const FractionalAllocation& x, int k) {
  if (family == Family::Efe) {
    int other = con.involved[0] == con.owner_row ? con.involved[1] : con.involved[0];
    return x(con.owner_row, k) - x(other, k);
  }
  double col = 0.0;
  for (int i = 0; i < x.rows(); ++i) col += x(i, k);
  return x(con.owner_row, k) - col / x.rows();
}

int var_index(int i, int k, int m) { return i * m + k; }

void check_fair_solution(const FairSolveResult& res, const char* what) {
  auto check = validate_allocation(res.allocation, kFeasTol);
  if (!check.ok)
    throw InvariantError(std::string(what) + ": solver returned an invalid allocation: " +
                         check.to_string());
}

}  // namespace

StandardLP assemble_optimal_fair_lp(const MeanMatrix& mu, Family family) {
  const int n = mu.rows();
  const int m = mu.cols();
  StandardLP lp;
  lp.objective = mu.data();
  lp.lower.assign(n * m, 0.0);
  lp.names.resize(n * m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      lp.names[var_index(i, k, m)] = "X_" + std::to_string(i + 1) + "_" + std::to_string(k + 1);
  for (int k = 0; k < m; ++k) {
    std::vector<double> row(n * m, 0.0);
    for (int i = 0; i < n; ++i) row[var_index(i, k, m)] = 1.0;
    lp.add_row(std::move(row), RowSense::Eq, 1.0);
  }
  auto set = build_constraints(family, mu);
  for (const auto& con : set.constraints) lp.add_row(con.B.data(), RowSense::Ge, con.c);
  return lp;
}

FairSolveResult solve_optimal_fair(const MeanMatrix& mu, Family family) {
  auto lp = assemble_optimal_fair_lp(mu, family);
  auto rep = solve_lp(lp);
  if (rep.status != SolveStatus::Optimal)
    throw InvariantError("solve_optimal_fair: LP reported " + to_string(rep.status) +
                         " but UAR is always feasible");
  FairSolveResult res;
  res.value = rep.objective;
  res.allocation = Matrix(mu.rows(), mu.cols());
  for (int i = 0; i < mu.rows(); ++i)
    for (int k = 0; k < mu.cols(); ++k) res.allocation(i, k) = rep.x[var_index(i, k, mu.cols())];
  res.report = std::move(rep);
  check_fair_solution(res, "solve_optimal_fair");
  return res;
}

StandardLP assemble_robust_fair_lp(const ConfidenceBox& box, Family family) {
  box.validate();
  const int n = box.center.rows();
  const int m = box.center.cols();
  const int nx = n * m;

  // Epigraph variables: one |g| family per unordered EFE pair, one per PE
  // player, each with m components.
  int groups = family == Family::Efe ? n * (n - 1) / 2 : n;
  const int nz = groups * m;
  auto pair_group = [&](int i, int j) {
    int a = std::min(i, j), b = std::max(i, j);
    // Index of pair (a,b), a<b, in lexicographic order.
    return a * n - a * (a + 1) / 2 + (b - a - 1);
  };

  StandardLP lp;
  lp.objective.assign(nx + nz, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) lp.objective[var_index(i, k, m)] = box.center(i, k);
  lp.lower.assign(nx + nz, 0.0);
  lp.names.resize(nx + nz);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      lp.names[var_index(i, k, m)] = "X_" + std::to_string(i + 1) + "_" + std::to_string(k + 1);
  for (int g = 0; g < groups; ++g)
    for (int k = 0; k < m; ++k)
      lp.names[nx + g * m + k] = "z_" + std::to_string(g) + "_" + std::to_string(k + 1);

  for (int k = 0; k < m; ++k) {
    std::vector<double> row(nx + nz, 0.0);
    for (int i = 0; i < n; ++i) row[var_index(i, k, m)] = 1.0;
    lp.add_row(std::move(row), RowSense::Eq, 1.0);
  }

  // z >= |g|: for each group and column, z - g >= 0 and z + g >= 0.
  auto add_epigraph = [&](int group, int k, const std::vector<std::pair<int, double>>& g_coeffs) {
    for (double sign : {-1.0, 1.0}) {
      std::vector<double> row(nx + nz, 0.0);
      row[nx + group * m + k] = 1.0;
      for (auto [j, c] : g_coeffs) row[j] += sign * c;
      lp.add_row(std::move(row), RowSense::Ge, 0.0);
    }
  };
  if (family == Family::Efe) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < m; ++k)
          add_epigraph(pair_group(i, j), k,
                       {{var_index(i, k, m), 1.0}, {var_index(j, k, m), -1.0}});
  } else {
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < m; ++k) {
        std::vector<std::pair<int, double>> g;
        for (int i = 0; i < n; ++i)
          g.emplace_back(var_index(i, k, m), (i == l ? 1.0 - 1.0 / n : -1.0 / n));
        add_epigraph(l, k, g);
      }
  }

  // Robust rows: sum_k mid_k * g_k - hw_k * z_k >= 0, mid/hw taken from the
  // owner row's clamped intervals.
  auto add_robust = [&](int owner, int group,
                        const std::vector<std::vector<std::pair<int, double>>>& g_per_k) {
    std::vector<double> row(nx + nz, 0.0);
    for (int k = 0; k < m; ++k) {
      double mid = box.mid(owner, k);
      double hw = box.half_width(owner, k);
      for (auto [j, c] : g_per_k[k]) row[j] += mid * c;
      row[nx + group * m + k] -= hw;
    }
    lp.add_row(std::move(row), RowSense::Ge, 0.0);
  };
  if (family == Family::Efe) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        std::vector<std::vector<std::pair<int, double>>> g(m);
        for (int k = 0; k < m; ++k)
          g[k] = {{var_index(i, k, m), 1.0}, {var_index(j, k, m), -1.0}};
        add_robust(i, pair_group(i, j), g);
      }
  } else {
    for (int l = 0; l < n; ++l) {
      std::vector<std::vector<std::pair<int, double>>> g(m);
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < n; ++i)
          g[k].emplace_back(var_index(i, k, m), (i == l ? 1.0 - 1.0 / n : -1.0 / n));
      add_robust(l, l, g);
    }
  }
  return lp;
}

FairSolveResult solve_robust_fair(const ConfidenceBox& box, Family family) {
  auto lp = assemble_robust_fair_lp(box, family);
  auto rep = solve_lp(lp);
  if (rep.status != SolveStatus::Optimal)
    throw InvariantError("solve_robust_fair: LP reported " + to_string(rep.status) +
                         " but UAR is always robust-feasible");
  const int n = box.center.rows();
  const int m = box.center.cols();
  FairSolveResult res;
  res.value = rep.objective;
  res.allocation = Matrix(n, m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) res.allocation(i, k) = rep.x[var_index(i, k, m)];
  rep.aux.assign(rep.x.begin() + n * m, rep.x.end());
  res.report = std::move(rep);
  check_fair_solution(res, "solve_robust_fair");
  return res;
}

double robust_slack(Family family, const LinearConstraint& con, const FractionalAllocation& x,
                    const ConfidenceBox& box) {
  if (x.rows() != box.center.rows() || x.cols() != box.center.cols() ||
      con.B.rows() != x.rows() || con.B.cols() != x.cols())
    throw ValidationError("robust_slack: shape mismatch");
  double slack = 0.0;
  for (int k = 0; k < x.cols(); ++k) {
    double g = g_value(family, con, x, k);
    slack += (g >= 0.0 ? box.lo(con.owner_row, k) : box.hi(con.owner_row, k)) * g;
  }
  return slack - con.c;
}

}  // namespace fairdiv
