#include "fairdiv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fairdiv/lp.hpp"

namespace fairdiv {
namespace oracle {

namespace {

constexpr long long kMaxCandidates = 10'000'000;

// All length-n compositions of `units` (columns of the lattice).
std::vector<std::vector<int>> compositions(int n, int units) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  // Iterative odometer over the first n-1 entries; the last absorbs the rest.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n - 1) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, units);
  return out;
}

double own_value(const MeanMatrix& mu, const FractionalAllocation& x, int viewer, int holder) {
  double s = 0.0;
  for (int k = 0; k < mu.cols(); ++k) s += x(holder, k) * mu(viewer, k);
  return s;
}

}  // namespace

std::string instance_digest(const std::vector<const Matrix*>& parts) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* p, size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (size_t j = 0; j < len; ++j) {
      h ^= bytes[j];
      h *= 0x100000001b3ULL;
    }
  };
  for (const Matrix* m : parts) {
    int dims[2] = {m->rows(), m->cols()};
    mix(dims, sizeof dims);
    mix(m->data().data(), m->data().size() * sizeof(double));
  }
  char buf[2 * sizeof(uint64_t) + 1];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool definition_fair(const MeanMatrix& mu, const FractionalAllocation& x, Family family,
                     double tol) {
  const int n = mu.rows();
  for (int i = 0; i < n; ++i) {
    double own = own_value(mu, x, i, i);
    if (family == Family::Efe) {
      for (int j = 0; j < n; ++j)
        if (own < own_value(mu, x, i, j) - tol) return false;
    } else {
      double avg = 0.0;
      for (int j = 0; j < n; ++j) avg += own_value(mu, x, i, j);
      if (own < avg / n - tol) return false;
    }
  }
  return true;
}

GridSearchResult grid_search_optimal(const MeanMatrix& mu, Family family, double resolution) {
  if (!(resolution > 0.0) || resolution > 1.0)
    throw ValidationError("grid_search_optimal: resolution must be in (0, 1]");
  const int n = mu.rows();
  const int m = mu.cols();
  const int units = std::max(1, static_cast<int>(std::llround(1.0 / resolution)));
  auto columns = compositions(n, units);

  double count = 1.0;
  for (int k = 0; k < m; ++k) count *= static_cast<double>(columns.size());
  if (count > static_cast<double>(kMaxCandidates))
    throw ValidationError("grid_search_optimal: lattice too large (" + std::to_string(count) +
                          " candidates)");

  const double b = mu.max();
  const double feas_tol = 2.0 * m * b * (1.0 / units);

  GridSearchResult best;
  best.value = -std::numeric_limits<double>::infinity();
  FractionalAllocation x(n, m);
  std::vector<size_t> choice(m, 0);

  for (;;) {
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i) x(i, k) = static_cast<double>(columns[choice[k]][i]) / units;
    ++best.candidates;
    double value = frobenius_product(x, mu);
    if (value > best.value && definition_fair(mu, x, family, feas_tol)) {
      best.value = value;
      best.best = x;
    }
    int k = 0;
    while (k < m && ++choice[k] == columns.size()) choice[k++] = 0;
    if (k == m) break;
  }
  if (best.best.empty()) throw InvariantError("grid_search_optimal: no feasible lattice point");
  return best;
}

VertexLpResult robust_lp_via_vertex_enumeration(const ConfidenceBox& box, Family family) {
  box.validate();
  const int n = box.center.rows();
  const int m = box.center.cols();
  if (n * m > 9)
    throw ValidationError("robust_lp_via_vertex_enumeration: instance too large (n*m > 9)");

  StandardLP lp;
  lp.objective.assign(static_cast<size_t>(n) * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) lp.objective[static_cast<size_t>(i) * m + k] = box.center(i, k);
  lp.lower.assign(static_cast<size_t>(n) * m, 0.0);

  for (int k = 0; k < m; ++k) {
    std::vector<double> row(static_cast<size_t>(n) * m, 0.0);
    for (int i = 0; i < n; ++i) row[static_cast<size_t>(i) * m + k] = 1.0;
    lp.add_row(std::move(row), RowSense::Eq, 1.0);
  }

  VertexLpResult res;
  // One row per (constraint, owner-row vertex). Coefficients come straight
  // from the fairness definitions.
  auto add_vertex_rows = [&](int owner, auto&& fill_g) {
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<double> g(static_cast<size_t>(n) * m, 0.0);
      fill_g(g);
      std::vector<double> row(static_cast<size_t>(n) * m, 0.0);
      for (int k = 0; k < m; ++k) {
        double mu_v = (mask >> k) & 1u ? box.hi(owner, k) : box.lo(owner, k);
        for (int i = 0; i < n; ++i)
          row[static_cast<size_t>(i) * m + k] += mu_v * g[static_cast<size_t>(i) * m + k];
      }
      lp.add_row(std::move(row), RowSense::Ge, 0.0);
      ++res.rows;
    }
  };

  if (family == Family::Efe) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        add_vertex_rows(i, [&](std::vector<double>& g) {
          for (int k = 0; k < m; ++k) {
            g[static_cast<size_t>(i) * m + k] = 1.0;
            g[static_cast<size_t>(j) * m + k] = -1.0;
          }
        });
      }
  } else {
    for (int l = 0; l < n; ++l) {
      add_vertex_rows(l, [&](std::vector<double>& g) {
        for (int k = 0; k < m; ++k)
          for (int i = 0; i < n; ++i)
            g[static_cast<size_t>(i) * m + k] = (i == l ? 1.0 - 1.0 / n : -1.0 / n);
      });
    }
  }

  auto rep = solve_lp(lp);
  if (rep.status != SolveStatus::Optimal)
    throw InvariantError("robust_lp_via_vertex_enumeration: LP reported " +
                         to_string(rep.status) + " but UAR is always feasible");
  res.value = rep.objective;
  res.x = Matrix(n, m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) res.x(i, k) = rep.x[static_cast<size_t>(i) * m + k];
  return res;
}

Property2Check verify_property2(const MeanMatrix& mu, const FractionalAllocation& y,
                                const FractionalAllocation& x_prime, double gamma, Family family) {
  Property2Check out;
  out.pass = true;
  const int n = mu.rows();
  const double tol = 1e-9;
  const double row_tol = 1e-12;

  auto rows_equal = [&](int i, int j) {
    for (int k = 0; k < mu.cols(); ++k)
      if (std::abs(x_prime(i, k) - x_prime(j, k)) > row_tol) return false;
    return true;
  };

  auto check_pair = [&](const std::string& label, double slack,
                        const std::vector<int>& involved) {
    bool equal = true;
    for (size_t j = 1; j < involved.size(); ++j)
      equal = equal && rows_equal(involved[0], involved[j]);
    if (!equal && slack < gamma - tol) {
      out.pass = false;
      out.failures.push_back(label + " slack " + std::to_string(slack) + " < gamma and rows differ");
    }
  };

  if (family == Family::Efe) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double slack = own_value(mu, x_prime, i, i) - own_value(mu, x_prime, i, j);
        check_pair("efe:" + std::to_string(i + 1) + "->" + std::to_string(j + 1), slack, {i, j});
      }
  } else {
    std::vector<int> everyone(n);
    for (int i = 0; i < n; ++i) everyone[i] = i;
    for (int i = 0; i < n; ++i) {
      double avg = 0.0;
      for (int j = 0; j < n; ++j) avg += own_value(mu, x_prime, i, j);
      double slack = own_value(mu, x_prime, i, i) - avg / n;
      check_pair("pe:" + std::to_string(i + 1), slack, everyone);
    }
  }

  double sw_y = 0.0, sw_x = 0.0;
  for (int i = 0; i < n; ++i) {
    sw_y += own_value(mu, y, i, i);
    sw_x += own_value(mu, x_prime, i, i);
  }
  out.welfare_loss = sw_y - sw_x;
  return out;
}

}  // namespace oracle
}  // namespace fairdiv
