#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairdiv/core.hpp"
#include "fairdiv/rng.hpp"

using namespace fairdiv;

TEST_CASE("make_uar fills every entry with 1/n") {
  auto x = make_uar(2, 2);
  CHECK(x == Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}));

  auto col = make_uar(4, 1);
  for (int i = 0; i < 4; ++i) CHECK(col(i, 0) == 0.25);

  auto x32 = make_uar(3, 2);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k) CHECK(x32(i, k) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(validate_allocation(x32, 1e-12).ok);

  CHECK_THROWS_AS(make_uar(0, 2), ValidationError);
  CHECK_THROWS_AS(make_uar(2, 0), ValidationError);
}

TEST_CASE("frobenius_product") {
  CHECK(frobenius_product(Matrix::from_rows({{1, 0}, {0, 1}}),
                          Matrix::from_rows({{2, 1}, {1, 2}})) == 4.0);
  CHECK(frobenius_product(Matrix::from_rows({{0.3, 0.7}, {0.7, 0.3}}), Matrix(2, 2)) == 0.0);
  CHECK(frobenius_product(make_uar(2, 2), Matrix::from_rows({{3, 3}, {1, 1}})) == 4.0);
  CHECK_THROWS_AS(frobenius_product(Matrix(2, 2), Matrix(2, 3)), ValidationError);
}

TEST_CASE("frobenius_product is bilinear") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a(3, 4), a2(3, 4), b(3, 4), sum(3, 4);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k) {
        a(i, k) = rng.uniform(-2, 2);
        a2(i, k) = rng.uniform(-2, 2);
        b(i, k) = rng.uniform(-2, 2);
        sum(i, k) = a(i, k) + a2(i, k);
      }
    CHECK(frobenius_product(sum, b) ==
          doctest::Approx(frobenius_product(a, b) + frobenius_product(a2, b)).epsilon(1e-9));
  }
}

TEST_CASE("welfare of a valid allocation is at least n*a*min_row_sum") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.below(3));
    int m = 1 + static_cast<int>(rng.below(4));
    double a = rng.uniform(0.1, 1.0);
    double b = a + rng.uniform(0.0, 2.0);
    Matrix mu(n, m), x(n, m);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k) mu(i, k) = rng.uniform(a, b);
    for (int k = 0; k < m; ++k) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += (x(i, k) = rng.uniform(0, 1));
      for (int i = 0; i < n; ++i) x(i, k) /= total;
    }
    double min_row = x.row_sum(0);
    for (int i = 1; i < n; ++i) min_row = std::min(min_row, x.row_sum(i));
    double welfare = frobenius_product(x, mu);
    CHECK(welfare >= n * a * min_row - 1e-9);
    CHECK(welfare >= 0.0);
  }
}

TEST_CASE("validate_allocation") {
  CHECK(validate_allocation(make_uar(3, 3), 1e-9).ok);

  auto bad = validate_allocation(Matrix::from_rows({{0.6}, {0.6}}), 1e-9);
  CHECK(!bad.ok);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].kind == AllocationViolation::Kind::ColumnSum);
  CHECK(bad.violations[0].k == 0);
  CHECK(bad.violations[0].value == doctest::Approx(1.2));

  // Tiny negatives within tolerance are fine.
  CHECK(validate_allocation(Matrix::from_rows({{1.0}, {-1e-12}}), 1e-9).ok);

  CHECK_THROWS_AS(validate_allocation(make_uar(2, 2), 0.0), ValidationError);
}

TEST_CASE("problem spec validation") {
  ProblemSpec spec;
  spec.n = 2;
  spec.m = 2;
  spec.T = 10;
  spec.a = 1.0;
  spec.b = 2.0;
  spec.item_distribution = ProblemSpec::uniform_distribution(2);
  CHECK_NOTHROW(spec.validate());

  auto broken = spec;
  broken.a = 0.0;
  CHECK_THROWS_AS(broken.validate(), ValidationError);
  broken = spec;
  broken.b = 0.5;
  CHECK_THROWS_AS(broken.validate(), ValidationError);
  broken = spec;
  broken.item_distribution = {0.6, 0.5};
  CHECK_THROWS_AS(broken.validate(), ValidationError);
  broken = spec;
  broken.n = 1;
  CHECK_THROWS_AS(broken.validate(), ValidationError);
}

TEST_CASE("confidence box clamps to [a, b]") {
  ConfidenceBox box;
  box.center = Matrix::from_rows({{2.0, 1.0}});
  box.radius = Matrix::from_rows({{0.5, 0.5}});
  box.floor_a = 1.0;
  box.ceil_b = 2.2;
  CHECK_NOTHROW(box.validate());
  CHECK(box.lo(0, 0) == 1.5);
  CHECK(box.hi(0, 0) == 2.2);
  CHECK(box.lo(0, 1) == 1.0);
  CHECK(box.hi(0, 1) == 1.5);
  CHECK(box.contains(Matrix::from_rows({{2.1, 1.2}})));
  CHECK(!box.contains(Matrix::from_rows({{2.1, 1.6}})));

  box.radius(0, 0) = -0.1;
  CHECK_THROWS_AS(box.validate(), ValidationError);
}
