#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdiv {

// Numeric tolerances used across the library: feasibility checks compare
// slacks and column sums at kFeasTol; LP objective values are compared at
// kObjTol (dense double-precision simplex on small instances).
inline constexpr double kFeasTol = 1e-9;
inline constexpr double kObjTol = 1e-6;

// Hard cap on player / item-type counts, enforced at config parse.
inline constexpr int kMaxDim = 64;

// Invalid or inconsistent input supplied by a caller or a config file.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A broken internal invariant (e.g. an LP that must be feasible is not).
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

enum class Family { Efe, Pe };

std::string to_string(Family family);
Family family_from_string(const std::string& s);

// Dense row-major matrix of doubles. All matrices in this library are small
// (rows, cols <= kMaxDim), so no sparsity or expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int i, int k) { return v_[static_cast<size_t>(i) * cols_ + k]; }
  double operator()(int i, int k) const { return v_[static_cast<size_t>(i) * cols_ + k]; }

  std::span<const double> row(int i) const {
    return {v_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }
  std::span<double> row(int i) {
    return {v_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }

  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool operator==(const Matrix& o) const = default;

  double min() const;
  double max() const;
  double column_sum(int k) const;
  double row_sum(int i) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> v_;
};

// Semantic aliases. A MeanMatrix holds per-(player, type) mean values; a
// FractionalAllocation is column-stochastic (see validate_allocation).
using MeanMatrix = Matrix;
using FractionalAllocation = Matrix;

// Static description of a problem instance.
struct ProblemSpec {
  int n = 0;                             // players, >= 2
  int m = 0;                             // item types, >= 1
  long long T = 0;                       // horizon, >= 1
  double a = 0.0;                        // lower mean bound, > 0
  double b = 0.0;                        // upper mean bound, >= a
  Family family = Family::Efe;
  std::vector<double> item_distribution; // size m, sums to 1

  // Uniform distribution over [m].
  static std::vector<double> uniform_distribution(int m);

  void validate() const;  // throws ValidationError
};

// Entrywise interval set {mu' : |mu' - center| <= radius}, intersected with
// [floor_a, ceil_b]. The effective interval per entry is
// [max(a, center - radius), min(b, center + radius)].
struct ConfidenceBox {
  MeanMatrix center;
  Matrix radius;
  double floor_a = 0.0;
  double ceil_b = 0.0;

  double lo(int i, int k) const;
  double hi(int i, int k) const;
  // Midpoint and half-width of the clamped interval.
  double mid(int i, int k) const { return 0.5 * (lo(i, k) + hi(i, k)); }
  double half_width(int i, int k) const { return 0.5 * (hi(i, k) - lo(i, k)); }

  bool contains(const MeanMatrix& mu, double tol = 0.0) const;
  void validate() const;  // nonempty intervals, nonnegative radii
};

// The uniform-at-random allocation: every entry is 1/n.
FractionalAllocation make_uar(int n, int m);

// Frobenius inner product <A, B> = sum_{i,k} A_ik * B_ik.
double frobenius_product(const Matrix& a, const Matrix& b);

// <X_i, mu_w>: player w's valuation of row i of X.
double row_value(const FractionalAllocation& x, int i, const MeanMatrix& mu, int w);

struct AllocationViolation {
  enum class Kind { Entry, ColumnSum };
  Kind kind;
  int i = -1;  // entry row (Kind::Entry only)
  int k = -1;  // column
  double value = 0.0;
  std::string to_string() const;
};

struct AllocationCheck {
  bool ok = true;
  std::vector<AllocationViolation> violations;
  std::string to_string() const;
};

// ok iff all entries lie in [-tol, 1 + tol] and every column sum is within
// tol of 1. Violations are reported, never thrown.
AllocationCheck validate_allocation(const FractionalAllocation& x, double tol);

}  // namespace fairdiv
