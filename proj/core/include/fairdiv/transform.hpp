#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/core.hpp"

namespace fairdiv {

struct EnvySlackEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;  // <X_from, mu_from> - <X_to, mu_from>
};

// Directed graph over players. Strict mode: edge i -> i' iff the weight is
// < alpha. Weak mode (alpha must be 0): edge iff the weight is <= 0.
struct EnvySlackGraph {
  int n = 0;
  double alpha = 0.0;
  bool strict = true;
  Matrix weights;                    // full pairwise weight table
  std::vector<EnvySlackEdge> edges;  // ordered by (from, to)

  bool has_edge(int i, int j) const;
};

EnvySlackGraph build_envy_slack_graph(const MeanMatrix& mu, const FractionalAllocation& x,
                                      double alpha, bool strict);

// Partition of players by exact row equality (entrywise within 1e-12).
// Classes are ordered by smallest member.
struct EquivalenceClasses {
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;
};

EquivalenceClasses equivalence_classes(const FractionalAllocation& x);

// op1: the sink class S sheds allocation mass to everyone else. If the
// prescribed transfer would drive an entry negative it is scaled down to the
// largest feasible fraction and *clamped is set.
FractionalAllocation drain_sink_class(const std::vector<int>& s, double alpha,
                                      const FractionalAllocation& x, double b,
                                      bool* clamped = nullptr);

// op2: every cycle node's row becomes the average of its own row and its
// successor's row.
FractionalAllocation half_shift_cycle(const std::vector<int>& cycle,
                                      const FractionalAllocation& x);

// op3: all rows in q are replaced by their average.
FractionalAllocation average_clique(const std::vector<int>& q, const FractionalAllocation& x);

// op4: keeps, for each equivalence class, only its minimum-weight outgoing
// cross-class edges, then walks those edges until a class repeats. Returns
// the node cycle (at most one node per class), or nullopt when no class has
// an outgoing cross-class edge.
std::optional<std::vector<int>> min_slack_class_cycle(const EnvySlackGraph& g,
                                                      const EquivalenceClasses& classes);

// op5: rows in u are scaled by (1 - |N\u| beta); every outside row gains
// beta times the column mass of u.
FractionalAllocation mass_transfer(const std::vector<int>& u, double beta,
                                   const FractionalAllocation& x);

// op6 / "Remove Envy": returns x unchanged when no player strictly envies
// another; otherwise fixes the lexicographically smallest envious pair by
// transferring mass away from the envied set until the envy is gone or a
// weak-envy cycle through the pair appears, in which case the cycle rotates.
// The strict-envy edge count strictly decreases (asserted).
FractionalAllocation remove_envy(const MeanMatrix& mu, const FractionalAllocation& x);

struct ConstraintOutcome {
  std::string label;
  bool equal_rows = false;  // involved rows identical within 1e-12
  double slack = 0.0;
};

struct TransformReport {
  FractionalAllocation x_prime;
  int iterations = 0;
  double final_alpha = 0.0;
  std::vector<ConstraintOutcome> outcomes;  // one per constraint
  double welfare_loss = 0.0;                // <Y,mu> - <X',mu>
  int clamp_events = 0;
  bool case1_uar = false;  // proportional transform took the low-slack case
  double gamma = 0.0;
  double alpha0 = 0.0;  // initial envy-with-slack threshold (EFE transform)
};

// Proportionality slack transform. Computes each player's slack
// S_i = <Y_i, mu_i> - (1/n)||mu_i||_1. If sum_i S_i <= (b/a) n gamma the
// result is UAR; otherwise mass Delta_ik proportional to row shares and
// slack shares moves through a communal pot, leaving every player with PE
// slack >= gamma at a social-welfare cost of at most (b/a) n gamma.
TransformReport proportional_slack_transform(const MeanMatrix& mu, const FractionalAllocation& y,
                                             double gamma, double a, double b);

// Largest gamma the EFE transform accepts: a * exp(-n^2 log(4 b' n^4)
// - n^3 log(2n)) with b' = b/a (the transform rescales means so a = 1).
double efe_gamma_upper_bound(int n, double a, double b);

struct EfeTransformOptions {
  // Permit gamma above efe_gamma_upper_bound; the final-alpha >= gamma
  // guarantee is then void but the loop still runs (used to exercise the
  // large-threshold paths).
  bool allow_gamma_above_bound = false;
  std::ostream* verbose = nullptr;  // one line per outer iteration
};

// Envy slack transform (the outer loop over envy-with-slack graphs with
// shrinking alpha). Requires y envy-free for mu at tol 1e-9. The output is
// envy-free, and for every ordered pair either the EFE slack is
// >= gamma - 1e-9 or the two rows are equal. Outer iterations are capped at
// n^3 (a broken cap is an invariant failure, not an input error).
TransformReport efe_slack_transform(const MeanMatrix& mu, const FractionalAllocation& y,
                                    double gamma, double a, double b,
                                    const EfeTransformOptions& opts = {});

}  // namespace fairdiv
