#include "fairdiv/transform.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "fairdiv/constraints.hpp"

namespace fairdiv {

namespace {

constexpr double kRowTol = 1e-12;   // row-equality tolerance
constexpr double kNegTol = 1e-12;   // strict-envy detection inside the loops
constexpr double kEnvyFreeTol = 1e-9;

Matrix weight_table(const MeanMatrix& mu, const FractionalAllocation& x) {
  const int n = x.rows();
  Matrix w(n, n);
  std::vector<double> value(static_cast<size_t>(n) * n);
  for (int viewer = 0; viewer < n; ++viewer)
    for (int holder = 0; holder < n; ++holder)
      value[static_cast<size_t>(viewer) * n + holder] = row_value(x, holder, mu, viewer);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w(i, j) = value[static_cast<size_t>(i) * n + i] - value[static_cast<size_t>(i) * n + j];
  return w;
}

bool rows_equal(const FractionalAllocation& x, int i, int j, double tol = kRowTol) {
  for (int k = 0; k < x.cols(); ++k)
    if (std::abs(x(i, k) - x(j, k)) > tol) return false;
  return true;
}

int strict_envy_count(const Matrix& w) {
  int count = 0;
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j)
      if (i != j && w(i, j) < -kNegTol) ++count;
  return count;
}

double min_weight(const Matrix& w) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j)
      if (i != j) worst = std::min(worst, w(i, j));
  return worst;
}

// Depth-first path from `from` to `to` over weak edges (w <= kNegTol),
// neighbors visited in increasing index. Returns the path including both
// endpoints, or nullopt.
std::optional<std::vector<int>> weak_path(const Matrix& w, int from, int to) {
  const int n = w.rows();
  std::vector<int> parent(n, -2);
  std::vector<int> stack{from};
  parent[from] = -1;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int next = 0; next < n; ++next) {
      if (next == cur || parent[next] != -2) continue;
      if (w(cur, next) > kNegTol) continue;
      parent[next] = cur;
      if (next == to) {
        std::vector<int> path{to};
        for (int p = cur; p != -1; p = parent[p]) path.push_back(p);
        std::reverse(path.begin(), path.end());
        return path;
      }
      stack.push_back(next);
    }
  }
  return std::nullopt;
}

}  // namespace

bool EnvySlackGraph::has_edge(int i, int j) const {
  if (i == j) return false;
  double w = weights(i, j);
  return strict ? w < alpha : w <= 0.0;
}

EnvySlackGraph build_envy_slack_graph(const MeanMatrix& mu, const FractionalAllocation& x,
                                      double alpha, bool strict) {
  if (!mu.same_shape(x)) throw ValidationError("build_envy_slack_graph: shape mismatch");
  if (alpha < 0.0) throw ValidationError("build_envy_slack_graph: alpha must be >= 0");
  if (!strict && alpha != 0.0)
    throw ValidationError("build_envy_slack_graph: weak mode requires alpha == 0");
  EnvySlackGraph g;
  g.n = x.rows();
  g.alpha = alpha;
  g.strict = strict;
  g.weights = weight_table(mu, x);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      if (i == j) continue;
      if (g.has_edge(i, j)) g.edges.push_back({i, j, g.weights(i, j)});
    }
  return g;
}

EquivalenceClasses equivalence_classes(const FractionalAllocation& x) {
  EquivalenceClasses out;
  out.class_of.assign(x.rows(), -1);
  for (int i = 0; i < x.rows(); ++i) {
    bool placed = false;
    for (size_t c = 0; c < out.classes.size() && !placed; ++c) {
      if (rows_equal(x, i, out.classes[c].front())) {
        out.classes[c].push_back(i);
        out.class_of[i] = static_cast<int>(c);
        placed = true;
      }
    }
    if (!placed) {
      out.class_of[i] = static_cast<int>(out.classes.size());
      out.classes.push_back({i});
    }
  }
  return out;
}

FractionalAllocation drain_sink_class(const std::vector<int>& s, double alpha,
                                      const FractionalAllocation& x, double b, bool* clamped) {
  if (s.empty()) throw ValidationError("drain_sink_class: empty class");
  const int n = x.rows();
  const int m = x.cols();
  for (int member : s)
    if (!rows_equal(x, member, s.front()))
      throw ValidationError("drain_sink_class: class rows are not identical");
  double mass = 0.0;
  for (int k = 0; k < m; ++k) mass += x(s.front(), k);
  if (!(mass > 0.0)) throw ValidationError("drain_sink_class: class has zero total mass");

  const double size = static_cast<double>(s.size());
  const double out_count = n - size;
  // Shed fraction per class entry; scaled down if it would overshoot.
  double denom = 2.0 * b * n * mass;
  double scale = 1.0;
  if (out_count * alpha > denom) {
    scale = denom / (out_count * alpha);
    if (clamped) *clamped = true;
  } else if (clamped) {
    *clamped = false;
  }
  std::vector<char> in_s(n, 0);
  for (int member : s) in_s[member] = 1;

  FractionalAllocation out = x;
  for (int k = 0; k < m; ++k) {
    double base = alpha * scale * x(s.front(), k) / denom;
    for (int i = 0; i < n; ++i) {
      if (in_s[i])
        out(i, k) = x(i, k) - out_count * base;
      else
        out(i, k) = x(i, k) + size * base;
    }
  }
  return out;
}

FractionalAllocation half_shift_cycle(const std::vector<int>& cycle,
                                      const FractionalAllocation& x) {
  if (cycle.size() < 2) throw ValidationError("half_shift_cycle: cycle needs >= 2 nodes");
  std::set<int> seen(cycle.begin(), cycle.end());
  if (seen.size() != cycle.size()) throw ValidationError("half_shift_cycle: cycle is not simple");
  FractionalAllocation out = x;
  for (size_t j = 0; j < cycle.size(); ++j) {
    int node = cycle[j];
    int next = cycle[(j + 1) % cycle.size()];
    for (int k = 0; k < x.cols(); ++k) out(node, k) = 0.5 * (x(node, k) + x(next, k));
  }
  return out;
}

FractionalAllocation average_clique(const std::vector<int>& q, const FractionalAllocation& x) {
  if (q.size() < 2) throw ValidationError("average_clique: needs >= 2 nodes");
  FractionalAllocation out = x;
  for (int k = 0; k < x.cols(); ++k) {
    double avg = 0.0;
    for (int i : q) avg += x(i, k);
    avg /= static_cast<double>(q.size());
    for (int i : q) out(i, k) = avg;
  }
  return out;
}

std::optional<std::vector<int>> min_slack_class_cycle(const EnvySlackGraph& g,
                                                      const EquivalenceClasses& classes) {
  if (!g.strict) throw ValidationError("min_slack_class_cycle: requires a strict-mode graph");
  const int nc = static_cast<int>(classes.classes.size());

  // Per class: the minimum-weight outgoing cross-class edge (lexicographic
  // tie-break on (from, to)).
  struct MinEdge {
    bool present = false;
    int from = -1, to = -1;
    double weight = 0.0;
  };
  std::vector<MinEdge> min_edge(nc);
  for (const auto& e : g.edges) {
    int cf = classes.class_of[e.from];
    if (cf == classes.class_of[e.to]) continue;
    auto& best = min_edge[cf];
    if (!best.present || e.weight < best.weight ||
        (e.weight == best.weight &&
         std::pair{e.from, e.to} < std::pair{best.from, best.to})) {
      best = {true, e.from, e.to, e.weight};
    }
  }

  for (int start = 0; start < nc; ++start) {
    if (!min_edge[start].present) continue;
    std::vector<int> pos_in_walk(nc, -1);
    std::vector<int> walk;  // class indices
    int cur = start;
    while (cur >= 0 && pos_in_walk[cur] < 0 && min_edge[cur].present) {
      pos_in_walk[cur] = static_cast<int>(walk.size());
      walk.push_back(cur);
      cur = classes.class_of[min_edge[cur].to];
    }
    if (cur >= 0 && pos_in_walk[cur] >= 0) {
      // Cycle = walk suffix from the first occurrence of `cur`. The node
      // representatives are the tails of the followed min-edges; consecutive
      // representatives are genuine graph edges because rows are a class
      // property.
      std::vector<int> cycle;
      for (size_t j = pos_in_walk[cur]; j < walk.size(); ++j)
        cycle.push_back(min_edge[walk[j]].from);
      return cycle;
    }
  }
  return std::nullopt;
}

FractionalAllocation mass_transfer(const std::vector<int>& u, double beta,
                                   const FractionalAllocation& x) {
  const int n = x.rows();
  if (u.empty() || static_cast<int>(u.size()) >= n)
    throw ValidationError("mass_transfer: U must be nonempty and a strict subset of players");
  std::vector<char> in_u(n, 0);
  for (int i : u) in_u[i] = 1;
  const double out_count = static_cast<double>(n - static_cast<int>(u.size()));
  if (beta < 0.0 || beta > 1.0 / out_count)
    throw ValidationError("mass_transfer: beta outside [0, 1/|N\\U|]");

  FractionalAllocation out = x;
  for (int k = 0; k < x.cols(); ++k) {
    double pool = 0.0;
    for (int i : u) pool += x(i, k);
    for (int i = 0; i < n; ++i) {
      if (in_u[i])
        out(i, k) = (1.0 - out_count * beta) * x(i, k);
      else
        out(i, k) = x(i, k) + beta * pool;
    }
  }
  return out;
}

FractionalAllocation remove_envy(const MeanMatrix& mu, const FractionalAllocation& x0) {
  const int n = x0.rows();
  Matrix w = weight_table(mu, x0);
  const int initial_strict = strict_envy_count(w);
  if (initial_strict == 0) return x0;
  const size_t initial_classes = equivalence_classes(x0).classes.size();

  // Lexicographically smallest strictly envious pair.
  int u = -1, v = -1;
  for (int i = 0; i < n && u < 0; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && w(i, j) < -kNegTol) {
        u = i;
        v = j;
        break;
      }

  std::set<int> in_u;
  for (int j = 0; j < n; ++j)
    if (j != u && w(u, j) < -kNegTol) in_u.insert(j);

  FractionalAllocation x = x0;
  const int iter_cap = 4 * n + 8;
  for (int iter = 0;; ++iter) {
    w = weight_table(mu, x);
    if (w(u, v) >= -kNegTol) break;
    if (auto path = weak_path(w, v, u)) {
      // Weak cycle through (u, v): every cycle node takes its successor's
      // row (which it weakly envies).
      std::vector<int> cycle{u};
      cycle.insert(cycle.end(), path->begin(), path->end() - 1);
      FractionalAllocation rotated = x;
      for (size_t j = 0; j < cycle.size(); ++j) {
        int node = cycle[j];
        int next = cycle[(j + 1) % cycle.size()];
        for (int k = 0; k < x.cols(); ++k) rotated(node, k) = x(next, k);
      }
      x = rotated;
      break;
    }
    if (iter >= iter_cap || static_cast<int>(in_u.size()) >= n)
      throw InvariantError("remove_envy: no progress fixing envy edge (" + std::to_string(u + 1) +
                           "," + std::to_string(v + 1) + ")");

    const double q = static_cast<double>(n - static_cast<int>(in_u.size()));
    std::vector<int> u_sorted(in_u.begin(), in_u.end());

    // Closed-form beta per candidate: utilities are affine in beta under
    // op5. For i in U against outsider o the crossing is
    // beta = (u_i - u_io) / (q u_i + s_i); already-envious pairs have no
    // forward crossing and are skipped.
    double best_beta = std::numeric_limits<double>::infinity();
    int best_i = -1, best_o = -1;
    std::vector<int> candidates;
    if (!in_u.count(u)) candidates.push_back(u);
    candidates.insert(candidates.end(), u_sorted.begin(), u_sorted.end());
    std::sort(candidates.begin(), candidates.end());
    for (int i : candidates) {
      if (i == u && !in_u.count(u)) {
        double own = row_value(x, u, mu, u);
        double val_v = row_value(x, v, mu, u);
        double s = 0.0;
        for (int j : u_sorted) s += row_value(x, j, mu, u);
        double den = s + q * val_v;
        if (den > kNegTol) {
          double beta = (val_v - own) / den;
          if (beta >= 0.0 && beta < best_beta) {
            best_beta = beta;
            best_i = u;
            best_o = v;
          }
        }
        continue;
      }
      double own = row_value(x, i, mu, i);
      double s = 0.0;
      for (int j : u_sorted) s += row_value(x, j, mu, i);
      double den = q * own + s;
      if (den <= kNegTol) continue;
      for (int o = 0; o < n; ++o) {
        if (in_u.count(o) || o == i) continue;
        double beta = (own - row_value(x, o, mu, i)) / den;
        if (beta < -kNegTol) continue;  // crossing lies in the past
        beta = std::max(beta, 0.0);
        if (beta < best_beta) {
          best_beta = beta;
          best_i = i;
          best_o = o;
        }
      }
    }
    if (best_i < 0)
      throw InvariantError("remove_envy: no feasible transfer found");

    x = mass_transfer(u_sorted, std::min(best_beta, 1.0 / q), x);
    in_u.insert(best_i == u ? u : best_o);
  }

  w = weight_table(mu, x);
  if (strict_envy_count(w) >= initial_strict)
    throw InvariantError("remove_envy: strict envy edge count did not decrease");
  if (equivalence_classes(x).classes.size() > initial_classes)
    throw InvariantError("remove_envy: equivalence class count increased");
  return x;
}

TransformReport proportional_slack_transform(const MeanMatrix& mu, const FractionalAllocation& y,
                                             double gamma, double a, double b) {
  if (!(gamma > 0.0)) throw ValidationError("proportional_slack_transform: gamma must be > 0");
  if (!(a > 0.0) || !(b >= a)) throw ValidationError("proportional_slack_transform: need 0 < a <= b");
  if (!mu.same_shape(y)) throw ValidationError("proportional_slack_transform: shape mismatch");
  const int n = mu.rows();
  const int m = mu.cols();

  auto set = build_constraints(Family::Pe, mu);
  auto sat = all_satisfied(set, y, kEnvyFreeTol);
  if (!sat.ok)
    throw ValidationError("proportional_slack_transform: Y violates PE (" + sat.worst_label +
                          " slack " + std::to_string(sat.worst_slack) + ")");

  // Per-player slack over the proportional share.
  std::vector<double> slack(n);
  double total_slack = 0.0;
  for (int i = 0; i < n; ++i) {
    double prop = mu.row_sum(i) / n;
    slack[i] = row_value(y, i, mu, i) - prop;
    total_slack += slack[i];
  }

  TransformReport rep;
  rep.gamma = gamma;
  const double threshold = (b / a) * n * gamma;
  if (total_slack <= threshold) {
    rep.case1_uar = true;
    rep.x_prime = make_uar(n, m);
  } else {
    Matrix delta(n, m);
    for (int i = 0; i < n; ++i) {
      double row_mass = y.row_sum(i);
      if (!(row_mass > 0.0))
        throw InvariantError("proportional_slack_transform: PE-feasible row has zero mass");
      double share = (slack[i] / total_slack) * (n * gamma / a);
      for (int k = 0; k < m; ++k) delta(i, k) = (y(i, k) / row_mass) * share;
    }
    rep.x_prime = y;
    for (int k = 0; k < m; ++k) {
      double pot = 0.0;
      for (int i = 0; i < n; ++i) pot += delta(i, k);
      for (int i = 0; i < n; ++i) {
        double v = y(i, k) - delta(i, k) + pot / n;
        if (v < 0.0) {
          if (v < -kEnvyFreeTol)
            throw InvariantError("proportional_slack_transform: negative entry " +
                                 std::to_string(v));
          v = 0.0;
        }
        rep.x_prime(i, k) = v;
      }
    }
  }

  auto check = validate_allocation(rep.x_prime, kEnvyFreeTol);
  if (!check.ok)
    throw InvariantError("proportional_slack_transform: output invalid: " + check.to_string());
  rep.welfare_loss = frobenius_product(y, mu) - frobenius_product(rep.x_prime, mu);
  if (rep.welfare_loss > threshold + kEnvyFreeTol)
    throw InvariantError("proportional_slack_transform: welfare loss exceeds (b/a) n gamma");
  for (const auto& con : set.constraints) {
    ConstraintOutcome out;
    out.label = con.label;
    out.slack = constraint_slack(con, rep.x_prime);
    out.equal_rows = true;
    for (size_t j = 1; j < con.involved.size(); ++j)
      out.equal_rows = out.equal_rows &&
                       rows_equal(rep.x_prime, con.involved[0], con.involved[j]);
    if (!rep.case1_uar && out.slack < gamma - kEnvyFreeTol)
      throw InvariantError("proportional_slack_transform: slack guarantee broken for " +
                           con.label);
    rep.outcomes.push_back(std::move(out));
  }
  return rep;
}

double efe_gamma_upper_bound(int n, double a, double b) {
  if (n < 2 || !(a > 0.0) || !(b >= a)) throw ValidationError("efe_gamma_upper_bound: bad inputs");
  double bs = b / a;
  double log_mult = n * n * std::log(4.0 * bs * std::pow(n, 4)) + std::pow(n, 3) * std::log(2.0 * n);
  double g0 = a * std::exp(-log_mult);
  if (!(g0 > 0.0))
    throw ValidationError("efe_gamma_upper_bound: gamma_0 underflows for n=" + std::to_string(n));
  return g0;
}

TransformReport efe_slack_transform(const MeanMatrix& mu, const FractionalAllocation& y,
                                    double gamma, double a, double b,
                                    const EfeTransformOptions& opts) {
  if (!(gamma > 0.0)) throw ValidationError("efe_slack_transform: gamma must be > 0");
  if (!(a > 0.0) || !(b >= a)) throw ValidationError("efe_slack_transform: need 0 < a <= b");
  if (!mu.same_shape(y)) throw ValidationError("efe_slack_transform: shape mismatch");
  const int n = mu.rows();
  const long long budget = static_cast<long long>(n) * n * n;

  {
    Matrix w0 = weight_table(mu, y);
    if (min_weight(w0) < -kEnvyFreeTol)
      throw ValidationError("efe_slack_transform: Y is not envy-free at tol 1e-9");
  }
  const double gamma0 = efe_gamma_upper_bound(n, a, b);
  if (gamma > gamma0 && !opts.allow_gamma_above_bound)
    throw ValidationError("efe_slack_transform: gamma exceeds gamma_0 = " + std::to_string(gamma0));

  // Work on the rescaled instance with a = 1 (the construction's w.l.o.g.).
  MeanMatrix mu_s = mu;
  for (auto& v : mu_s.data()) v /= a;
  const double bs = b / a;
  const double gamma_s = gamma / a;
  double alpha = gamma_s * std::exp(n * n * std::log(4.0 * bs * std::pow(n, 4)) +
                                    std::pow(n, 3) * std::log(2.0 * n));

  TransformReport rep;
  rep.gamma = gamma;
  rep.alpha0 = a * alpha;
  const double cut_factor = 4.0 * bs * std::pow(n, 4);

  FractionalAllocation x = y;
  int iter = 0;
  for (;;) {
    Matrix w = weight_table(mu_s, x);
    if (min_weight(w) < -kEnvyFreeTol)
      throw InvariantError("efe_slack_transform: iteration lost envy-freeness");
    auto classes = equivalence_classes(x);
    auto g = build_envy_slack_graph(mu_s, x, alpha, /*strict=*/true);

    bool has_cross = false;
    for (const auto& e : g.edges)
      if (classes.class_of[e.from] != classes.class_of[e.to]) {
        has_cross = true;
        break;
      }
    if (!has_cross) break;
    if (iter >= budget)
      throw InvariantError("efe_slack_transform: n^3 iteration budget exceeded");

    const size_t edges_before = g.edges.size();
    const char* branch = nullptr;
    bool require_strict_drop = true;

    // Branch (i): a class with incoming cross-class edges but none outgoing.
    int sink = -1;
    for (size_t c = 0; c < classes.classes.size() && sink < 0; ++c) {
      bool in = false, out = false;
      for (const auto& e : g.edges) {
        int cf = classes.class_of[e.from], ct = classes.class_of[e.to];
        if (cf == ct) continue;
        if (ct == static_cast<int>(c)) in = true;
        if (cf == static_cast<int>(c)) out = true;
      }
      if (in && !out) sink = static_cast<int>(c);
    }

    if (sink >= 0) {
      bool clamped = false;
      x = drain_sink_class(classes.classes[sink], alpha, x, bs, &clamped);
      if (clamped) ++rep.clamp_events;
      alpha /= 2.0 * bs;
      branch = "op1";
    } else {
      auto cycle = min_slack_class_cycle(g, classes);
      if (!cycle)
        throw InvariantError("efe_slack_transform: op4 found no class cycle despite pending "
                             "cross-class edges");
      std::vector<char> in_cycle(n, 0);
      for (int node : *cycle) in_cycle[node] = 1;

      // Branch (ii): some node with an edge to some but not all other cycle
      // nodes.
      bool split_found = false;
      for (int uu = 0; uu < n && !split_found; ++uu) {
        bool edge_to_some = false, missing_to_some = false;
        for (int node : *cycle) {
          if (node == uu) continue;
          if (g.has_edge(uu, node))
            edge_to_some = true;
          else
            missing_to_some = true;
        }
        split_found = edge_to_some && missing_to_some;
      }

      if (split_found) {
        x = half_shift_cycle(*cycle, x);
        alpha /= 2.0;
        branch = "op2";
      } else {
        bool heavy_edge = false;
        for (const auto& e : g.edges)
          if (e.weight >= alpha / cut_factor) {
            heavy_edge = true;
            break;
          }
        if (heavy_edge) {
          alpha /= cut_factor;
          branch = "alpha-cut";
        } else {
          // Branch (iv): merge every class that meets the cycle, then clear
          // any envy the averaging introduced.
          std::vector<int> q;
          std::vector<char> class_used(classes.classes.size(), 0);
          for (int node : *cycle) class_used[classes.class_of[node]] = 1;
          for (size_t c = 0; c < classes.classes.size(); ++c)
            if (class_used[c])
              q.insert(q.end(), classes.classes[c].begin(), classes.classes[c].end());
          std::sort(q.begin(), q.end());
          x = average_clique(q, x);
          double alpha_avg = alpha / n;
          int calls = 0;
          while (strict_envy_count(weight_table(mu_s, x)) > 0) {
            x = remove_envy(mu_s, x);
            if (++calls > n * n)
              throw InvariantError("efe_slack_transform: remove_envy call budget exceeded");
          }
          alpha = alpha_avg / 2.0;
          branch = "merge";
          require_strict_drop = false;
        }
      }
    }
    ++iter;

    auto g_after = build_envy_slack_graph(mu_s, x, alpha, /*strict=*/true);
    if (g_after.edges.size() > edges_before ||
        (require_strict_drop && g_after.edges.size() >= edges_before))
      throw InvariantError(std::string("efe_slack_transform: edge count failed to decrease "
                                       "after ") + branch);
    if (opts.verbose) {
      *opts.verbose << "iter=" << iter << " branch=" << branch << " alpha=" << alpha
                    << " edges=" << g_after.edges.size()
                    << " classes=" << equivalence_classes(x).classes.size() << "\n";
    }
  }

  rep.x_prime = x;
  rep.iterations = iter;
  rep.final_alpha = a * alpha;
  auto check = validate_allocation(x, kEnvyFreeTol);
  if (!check.ok)
    throw InvariantError("efe_slack_transform: output invalid: " + check.to_string());
  {
    Matrix w = weight_table(mu, x);
    if (min_weight(w) < -kEnvyFreeTol)
      throw InvariantError("efe_slack_transform: output is not envy-free");
  }
  rep.welfare_loss = frobenius_product(y, mu) - frobenius_product(x, mu);
  auto set = build_constraints(Family::Efe, mu);
  for (const auto& con : set.constraints) {
    ConstraintOutcome out;
    out.label = con.label;
    out.slack = constraint_slack(con, x);
    out.equal_rows = rows_equal(x, con.involved[0], con.involved[1]);
    if (gamma <= gamma0 && !out.equal_rows && out.slack < gamma - kEnvyFreeTol)
      throw InvariantError("efe_slack_transform: slack/equal-rows disjunction broken for " +
                           con.label);
    rep.outcomes.push_back(std::move(out));
  }
  return rep;
}

}  // namespace fairdiv
