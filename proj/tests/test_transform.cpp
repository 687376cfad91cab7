#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fairdiv/constraints.hpp"
#include "fairdiv/lp.hpp"
#include "fairdiv/rng.hpp"
#include "fairdiv/transform.hpp"

using namespace fairdiv;

namespace {

FractionalAllocation random_allocation(Rng& rng, int n, int m) {
  Matrix x(n, m);
  for (int k = 0; k < m; ++k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += (x(i, k) = rng.uniform(0.01, 1.0));
    for (int i = 0; i < n; ++i) x(i, k) /= total;
  }
  return x;
}

void check_column_sums_preserved(const FractionalAllocation& before,
                                 const FractionalAllocation& after) {
  for (int k = 0; k < before.cols(); ++k)
    CHECK(std::abs(after.column_sum(k) - before.column_sum(k)) < 1e-12);
}

}  // namespace

TEST_CASE("proportional slack transform: zero-slack instance returns UAR") {
  auto mu = Matrix::from_rows({{1.0}, {1.0}});
  auto rep = proportional_slack_transform(mu, make_uar(2, 1), 0.3, 1.0, 1.0);
  CHECK(rep.case1_uar);
  CHECK(rep.x_prime == make_uar(2, 1));
  CHECK(rep.welfare_loss == doctest::Approx(0.0));
}

TEST_CASE("proportional slack transform: pot redistribution") {
  auto mu = Matrix::from_rows({{3, 1}, {1, 3}});
  auto y = Matrix::from_rows({{1, 0}, {0, 1}});
  auto rep = proportional_slack_transform(mu, y, 0.1, 1.0, 3.0);
  CHECK(!rep.case1_uar);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      CHECK(rep.x_prime(i, k) ==
            doctest::Approx(i == k ? 0.95 : 0.05).epsilon(1e-12));
  CHECK(rep.outcomes[0].slack == doctest::Approx(0.9));
  CHECK(rep.outcomes[0].slack >= 0.1 - 1e-9);
  CHECK(rep.welfare_loss == doctest::Approx(0.2));
  CHECK(rep.welfare_loss <= 0.6 + 1e-9);
}

TEST_CASE("proportional slack transform: gamma above the case split gives UAR") {
  auto mu = Matrix::from_rows({{3, 1}, {1, 3}});
  auto y = Matrix::from_rows({{1, 0}, {0, 1}});
  // (b/a) n gamma = 2.4 exceeds the total slack 2.
  auto rep = proportional_slack_transform(mu, y, 0.4, 1.0, 3.0);
  CHECK(rep.case1_uar);
  CHECK(rep.x_prime == make_uar(2, 2));
  CHECK(rep.welfare_loss == doctest::Approx(2.0));
  CHECK(rep.welfare_loss <= 2.4 + 1e-9);
}

TEST_CASE("proportional slack transform rejects bad inputs") {
  auto mu = Matrix::from_rows({{3, 1}, {1, 3}});
  CHECK_THROWS_AS(proportional_slack_transform(mu, Matrix::from_rows({{1, 1}, {0, 0}}), 0.1,
                                               1.0, 3.0),
                  ValidationError);  // Y violates PE
  CHECK_THROWS_AS(proportional_slack_transform(mu, make_uar(2, 2), 0.0, 1.0, 3.0),
                  ValidationError);
}

TEST_CASE("equivalence classes") {
  auto one = equivalence_classes(make_uar(3, 2));
  CHECK(one.classes.size() == 1);
  CHECK(one.classes[0] == std::vector<int>{0, 1, 2});

  auto two = equivalence_classes(Matrix::from_rows({{1, 0}, {0, 1}}));
  CHECK(two.classes.size() == 2);

  auto mixed = equivalence_classes(Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}, {0, 1}}));
  REQUIRE(mixed.classes.size() == 2);
  CHECK(mixed.classes[0] == std::vector<int>{0, 1});
  CHECK(mixed.classes[1] == std::vector<int>{2});
  CHECK(mixed.class_of[2] == 1);
}

TEST_CASE("envy-with-slack graphs") {
  auto mu = Matrix::from_rows({{1.0}, {1.0}});
  auto x = Matrix::from_rows({{0.6}, {0.4}});

  auto wide = build_envy_slack_graph(mu, x, 0.5, true);
  REQUIRE(wide.edges.size() == 2);
  CHECK(wide.edges[0].from == 0);
  CHECK(wide.edges[0].to == 1);
  CHECK(wide.edges[0].weight == doctest::Approx(0.2));
  CHECK(wide.edges[1].weight == doctest::Approx(-0.2));

  auto narrow = build_envy_slack_graph(mu, x, 0.1, true);
  REQUIRE(narrow.edges.size() == 1);
  CHECK(narrow.edges[0].from == 1);

  auto weak = build_envy_slack_graph(mu, make_uar(2, 1), 0.0, false);
  CHECK(weak.edges.size() == 2);  // complete digraph, all weights 0
  for (const auto& e : weak.edges) CHECK(e.weight == 0.0);

  CHECK_THROWS_AS(build_envy_slack_graph(mu, x, 0.1, false), ValidationError);
}

TEST_CASE("op1 drains a sink class") {
  auto x = Matrix::from_rows({{1.0}, {0.0}});
  auto out = drain_sink_class({0}, 0.4, x, 1.0);
  CHECK(out(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(out(1, 0) == doctest::Approx(0.1).epsilon(1e-15));

  // A class covering everyone has no recipients and changes nothing.
  auto all = drain_sink_class({0, 1}, 0.4, make_uar(2, 3), 1.0);
  CHECK(all == make_uar(2, 3));

  Rng rng(90);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(3));
    int m = 1 + static_cast<int>(rng.below(3));
    auto x2 = random_allocation(rng, n, m);
    // Make players 0 and 1 a genuine class.
    for (int k = 0; k < m; ++k) x2(1, k) = x2(0, k);
    bool clamped = false;
    auto out2 = drain_sink_class({0, 1}, rng.uniform(0.0, 1.0), x2, 2.0, &clamped);
    check_column_sums_preserved(x2, out2);
    for (double v : out2.data()) CHECK(v >= -1e-15);
  }

  CHECK_THROWS_AS(drain_sink_class({0}, 0.1, Matrix::from_rows({{0.0}, {1.0}}), 1.0),
                  ValidationError);
}

TEST_CASE("op1 clamps transfers that would overshoot") {
  // One unit of alpha against a class holding almost nothing.
  auto x = Matrix::from_rows({{1e-3}, {0.999}});
  bool clamped = false;
  auto out = drain_sink_class({0}, 1.0, x, 1.0, &clamped);
  CHECK(clamped);
  CHECK(out(0, 0) >= -1e-15);
  check_column_sums_preserved(x, out);
}

TEST_CASE("op2 averages along a cycle") {
  auto out = half_shift_cycle({0, 1}, Matrix::from_rows({{1, 0}, {0, 1}}));
  CHECK(out == make_uar(2, 2));

  auto eye3 = Matrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto shifted = half_shift_cycle({0, 1, 2}, eye3);
  CHECK(shifted == Matrix::from_rows({{0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}}));
  check_column_sums_preserved(eye3, shifted);

  CHECK(half_shift_cycle({0, 1}, make_uar(2, 2)) == make_uar(2, 2));  // equal rows fixed point
  CHECK_THROWS_AS(half_shift_cycle({0, 0}, make_uar(2, 2)), ValidationError);
  CHECK_THROWS_AS(half_shift_cycle({0}, make_uar(2, 2)), ValidationError);
}

TEST_CASE("op3 merges rows into their average") {
  auto out = average_clique({0, 1}, Matrix::from_rows({{1, 0}, {0, 1}}));
  CHECK(out == make_uar(2, 2));

  Rng rng(91);
  auto x = random_allocation(rng, 4, 3);
  std::vector<int> everyone{0, 1, 2, 3};
  auto merged = average_clique(everyone, x);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 3; ++k) CHECK(merged(i, k) == doctest::Approx(0.25).epsilon(1e-14));
  auto partial = average_clique({1, 3}, x);
  check_column_sums_preserved(x, partial);
  CHECK(equivalence_classes(partial).class_of[1] == equivalence_classes(partial).class_of[3]);

  CHECK_THROWS_AS(average_clique({2}, x), ValidationError);
}

TEST_CASE("op4 walks minimum out-edges to a class cycle") {
  auto mu = Matrix::from_rows({{1.0}, {1.0}});
  auto x = Matrix::from_rows({{0.6}, {0.4}});
  auto g = build_envy_slack_graph(mu, x, 0.5, true);
  auto cycle = min_slack_class_cycle(g, equivalence_classes(x));
  REQUIRE(cycle.has_value());
  CHECK(cycle->size() == 2);

  // No cross-class edges at a tight threshold.
  auto g2 = build_envy_slack_graph(mu, x, 1e-6, true);
  // Only the envious edge (2->1) remains; class {0} has no outgoing edge but
  // class {1} does, and the walk dies at class {0} -- no cycle.
  CHECK(!min_slack_class_cycle(g2, equivalence_classes(x)).has_value());

  // Three singleton classes with min-edges 0->1, 1->2, 2->0 and a heavier
  // distractor edge 0->2. Weights w(i,j) = <X_i - X_j, mu_i>:
  //   viewer 0 (mu=(1,1)): w(0,1) = 0.7-0.8 = -0.1 < w(0,2) = 0.2
  //   viewer 1 (mu=(1,4)): w(1,2) = 2.3-1.4 = 0.9 < w(1,0) = 1.0
  //   viewer 2 (mu=(2,1)): w(2,0) = 0.7-1.2 = -0.5 < w(2,1) = -0.4
  auto mu3 = Matrix::from_rows({{1.0, 1.0}, {1.0, 4.0}, {2.0, 1.0}});
  auto x3 = Matrix::from_rows({{0.5, 0.2}, {0.3, 0.5}, {0.2, 0.3}});
  auto g3 = build_envy_slack_graph(mu3, x3, 10.0, true);  // complete graph
  auto cycle3 = min_slack_class_cycle(g3, equivalence_classes(x3));
  REQUIRE(cycle3.has_value());
  CHECK(*cycle3 == std::vector<int>{0, 1, 2});

  CHECK_THROWS_AS(min_slack_class_cycle(build_envy_slack_graph(mu, x, 0.0, false),
                                        equivalence_classes(x)),
                  ValidationError);
}

TEST_CASE("op5 moves mass out of U") {
  auto x = Matrix::from_rows({{0.4}, {0.6}});
  CHECK(mass_transfer({1}, 0.0, x) == x);

  auto out = mass_transfer({1}, 1.0 / 6, x);
  CHECK(out(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out(1, 0) == doctest::Approx(0.5).epsilon(1e-15));

  Rng rng(92);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(3));
    int m = 1 + static_cast<int>(rng.below(3));
    auto x2 = random_allocation(rng, n, m);
    std::vector<int> u{0};
    if (n > 2 && rng.below(2)) u.push_back(1);
    double beta = rng.uniform(0.0, 1.0 / (n - static_cast<int>(u.size())));
    check_column_sums_preserved(x2, mass_transfer(u, beta, x2));
  }

  CHECK_THROWS_AS(mass_transfer({1}, 1.5, x), ValidationError);
  CHECK_THROWS_AS(mass_transfer({0, 1}, 0.1, x), ValidationError);
}

TEST_CASE("remove_envy fixes a single envious pair in closed form") {
  auto mu = Matrix::from_rows({{1.0}, {1.0}});
  auto x = Matrix::from_rows({{0.4}, {0.6}});
  auto out = remove_envy(mu, x);
  CHECK(out(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("remove_envy leaves envy-free allocations unchanged") {
  auto mu = Matrix::from_rows({{1, 1}, {1, 1}});
  auto x = Matrix::from_rows({{0, 1}, {1, 0}});  // all envy weights exactly 0
  CHECK(remove_envy(mu, x) == x);
  CHECK(remove_envy(mu, make_uar(2, 2)) == make_uar(2, 2));
}

TEST_CASE("remove_envy rotates a mutual-envy cycle") {
  auto mu = Matrix::from_rows({{2, 1}, {1, 2}});
  auto x = Matrix::from_rows({{0, 1}, {1, 0}});  // each strictly envies the other
  auto out = remove_envy(mu, x);
  CHECK(out == Matrix::from_rows({{1, 0}, {0, 1}}));
}

TEST_CASE("remove_envy drains envy on random perturbed instances") {
  Rng rng(93);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(3));
    int m = 2 + static_cast<int>(rng.below(2));
    auto mu = Matrix(n, m);
    for (auto& v : mu.data()) v = rng.uniform(1.0, 3.0);
    // Start from a fair optimum and nudge it toward a random merge, the way
    // the outer loop does.
    auto y = solve_optimal_fair(mu, Family::Efe).allocation;
    std::vector<int> q;
    for (int i = 0; i < n; ++i)
      if (rng.below(2)) q.push_back(i);
    if (q.size() >= 2) y = average_clique(q, y);
    auto x = y;
    int guard = 0;
    while (true) {
      auto g = build_envy_slack_graph(mu, x, 0.0, false);
      bool envious = false;
      for (const auto& e : g.edges)
        if (e.weight < -1e-12) envious = true;
      if (!envious) break;
      REQUIRE(guard++ < n * n + 1);
      auto before = x;
      x = remove_envy(mu, x);
      check_column_sums_preserved(before, x);
    }
  }
}

TEST_CASE("efe gamma bound matches the closed form") {
  // n=2, b=2: (4 b n^4)^{n^2} (2n)^{n^3} = 128^4 * 4^8 = 2^44.
  CHECK(efe_gamma_upper_bound(2, 1.0, 2.0) == doctest::Approx(std::pow(2.0, -44)).epsilon(1e-9));
}

TEST_CASE("efe transform: slack already everywhere") {
  auto mu = Matrix::from_rows({{2, 1}, {1, 2}});
  auto y = Matrix::from_rows({{1, 0}, {0, 1}});
  double gamma = 0.5 * efe_gamma_upper_bound(2, 1.0, 2.0);
  auto rep = efe_slack_transform(mu, y, gamma, 1.0, 2.0);
  CHECK(rep.iterations == 0);
  CHECK(rep.x_prime == y);
  CHECK(rep.welfare_loss == doctest::Approx(0.0));
}

TEST_CASE("efe transform: zero-slack pair merges to UAR") {
  auto mu = Matrix::from_rows({{3, 3}, {1, 1}});
  auto y = Matrix::from_rows({{1, 0}, {0, 1}});  // both EFE slacks exactly 0
  double gamma = 0.5 * efe_gamma_upper_bound(2, 1.0, 3.0);
  auto rep = efe_slack_transform(mu, y, gamma, 1.0, 3.0);
  CHECK(rep.x_prime == make_uar(2, 2));
  CHECK(rep.welfare_loss == doctest::Approx(0.0));  // welfare stays 4
  for (const auto& o : rep.outcomes) CHECK(o.equal_rows);
}

TEST_CASE("efe transform: threshold far above every slack") {
  auto mu = Matrix::from_rows({{2, 1}, {1, 2}});
  auto y = Matrix::from_rows({{1, 0}, {0, 1}});
  double gamma0 = efe_gamma_upper_bound(2, 1.0, 2.0);

  CHECK_THROWS_AS(efe_slack_transform(mu, y, 2 * gamma0, 1.0, 2.0), ValidationError);

  // alpha0 = 1000 exceeds every pairwise slack, so the pair merges.
  EfeTransformOptions opts;
  opts.allow_gamma_above_bound = true;
  auto rep = efe_slack_transform(mu, y, 1000.0 * gamma0, 1.0, 2.0, opts);
  CHECK(rep.alpha0 == doctest::Approx(1000.0).epsilon(1e-9));
  CHECK(rep.x_prime == make_uar(2, 2));
  CHECK(rep.welfare_loss == doctest::Approx(1.0));
  for (const auto& o : rep.outcomes) CHECK(o.equal_rows);
}

TEST_CASE("efe transform rejects bad inputs") {
  auto mu = Matrix::from_rows({{2, 1}, {1, 2}});
  CHECK_THROWS_AS(efe_slack_transform(mu, Matrix::from_rows({{0, 0}, {1, 1}}), 1e-15, 1.0, 2.0),
                  ValidationError);  // not envy-free
  CHECK_THROWS_AS(
      efe_slack_transform(mu, make_uar(2, 2), -1.0, 1.0, 2.0), ValidationError);
}

TEST_CASE("efe transform is invariant to rescaling means by 1/a") {
  Rng rng(94);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.below(2));
    int m = 2;
    double a = rng.uniform(0.5, 2.0);
    double b_over_a = rng.uniform(1.0, 2.5);
    Matrix mu(n, m);
    for (auto& v : mu.data()) v = rng.uniform(a, a * b_over_a);
    auto y = solve_optimal_fair(mu, Family::Efe).allocation;
    double gamma = 0.5 * efe_gamma_upper_bound(n, a, a * b_over_a);

    auto rep = efe_slack_transform(mu, y, gamma, a, a * b_over_a);
    auto scaled_mu = mu;
    for (auto& v : scaled_mu.data()) v /= a;
    auto rep_scaled = efe_slack_transform(scaled_mu, y, gamma / a, 1.0, b_over_a);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k)
        CHECK(rep.x_prime(i, k) == doctest::Approx(rep_scaled.x_prime(i, k)).epsilon(1e-9));
  }
}

TEST_CASE("efe transform verbose stream reports one line per iteration") {
  auto mu = Matrix::from_rows({{3, 3}, {1, 1}});
  auto y = Matrix::from_rows({{1, 0}, {0, 1}});
  std::ostringstream os;
  EfeTransformOptions opts;
  opts.verbose = &os;
  auto rep = efe_slack_transform(mu, y, 0.5 * efe_gamma_upper_bound(2, 1.0, 3.0), 1.0, 3.0, opts);
  int lines = 0;
  for (char c : os.str())
    if (c == '\n') ++lines;
  CHECK(lines == rep.iterations);
}
