#include "fairdiv/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fairdiv {

std::string to_string(Family family) {
  return family == Family::Efe ? "efe" : "pe";
}

Family family_from_string(const std::string& s) {
  if (s == "efe") return Family::Efe;
  if (s == "pe") return Family::Pe;
  throw ValidationError("unknown constraint family '" + s + "' (expected efe|pe)");
}

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw ValidationError("matrix dimensions must be nonnegative");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<int>(rows.size()),
           rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
  int i = 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m.cols_)
      throw ValidationError("ragged initializer for matrix");
    int k = 0;
    for (double x : r) m(i, k++) = x;
    ++i;
  }
  return m;
}

double Matrix::min() const {
  double best = std::numeric_limits<double>::infinity();
  for (double x : v_) best = std::min(best, x);
  return best;
}

double Matrix::max() const {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : v_) best = std::max(best, x);
  return best;
}

double Matrix::column_sum(int k) const {
  double s = 0.0;
  for (int i = 0; i < rows_; ++i) s += (*this)(i, k);
  return s;
}

double Matrix::row_sum(int i) const {
  double s = 0.0;
  for (int k = 0; k < cols_; ++k) s += (*this)(i, k);
  return s;
}

std::vector<double> ProblemSpec::uniform_distribution(int m) {
  return std::vector<double>(static_cast<size_t>(m), 1.0 / m);
}

void ProblemSpec::validate() const {
  if (n < 2) throw ValidationError("spec.n: player count must be >= 2");
  if (m < 1) throw ValidationError("spec.m: item-type count must be >= 1");
  if (n > kMaxDim || m > kMaxDim)
    throw ValidationError("spec.n/m: dimensions capped at " + std::to_string(kMaxDim));
  if (T < 1) throw ValidationError("spec.T: horizon must be >= 1");
  if (!(a > 0.0)) throw ValidationError("spec.a: lower mean bound must be > 0");
  if (!(b >= a)) throw ValidationError("spec.b: upper mean bound must be >= a");
  if (static_cast<int>(item_distribution.size()) != m)
    throw ValidationError("spec.item_distribution: length must equal m");
  double sum = 0.0;
  for (size_t k = 0; k < item_distribution.size(); ++k) {
    if (item_distribution[k] < 0.0)
      throw ValidationError("spec.item_distribution[" + std::to_string(k) + "]: must be >= 0");
    sum += item_distribution[k];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("spec.item_distribution: must sum to 1 within 1e-12");
}

double ConfidenceBox::lo(int i, int k) const {
  return std::max(floor_a, center(i, k) - radius(i, k));
}

double ConfidenceBox::hi(int i, int k) const {
  return std::min(ceil_b, center(i, k) + radius(i, k));
}

bool ConfidenceBox::contains(const MeanMatrix& mu, double tol) const {
  if (!mu.same_shape(center)) return false;
  for (int i = 0; i < mu.rows(); ++i)
    for (int k = 0; k < mu.cols(); ++k)
      if (mu(i, k) < lo(i, k) - tol || mu(i, k) > hi(i, k) + tol) return false;
  return true;
}

void ConfidenceBox::validate() const {
  if (!center.same_shape(radius)) throw ValidationError("box: center/radius shape mismatch");
  if (!(floor_a > 0.0) || !(ceil_b >= floor_a))
    throw ValidationError("box: requires 0 < floor <= ceiling");
  for (int i = 0; i < center.rows(); ++i)
    for (int k = 0; k < center.cols(); ++k) {
      if (!(radius(i, k) >= 0.0)) throw ValidationError("box: radius entries must be >= 0");
      if (lo(i, k) > hi(i, k))
        throw ValidationError("box: empty interval at entry (" + std::to_string(i) + "," +
                              std::to_string(k) + ")");
    }
}

FractionalAllocation make_uar(int n, int m) {
  if (n < 1 || m < 1) throw ValidationError("make_uar: requires n >= 1 and m >= 1");
  return Matrix(n, m, 1.0 / n);
}

double frobenius_product(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ValidationError("frobenius_product: shape mismatch");
  double s = 0.0;
  const auto& av = a.data();
  const auto& bv = b.data();
  for (size_t j = 0; j < av.size(); ++j) s += av[j] * bv[j];
  return s;
}

double row_value(const FractionalAllocation& x, int i, const MeanMatrix& mu, int w) {
  double s = 0.0;
  for (int k = 0; k < x.cols(); ++k) s += x(i, k) * mu(w, k);
  return s;
}

std::string AllocationViolation::to_string() const {
  std::ostringstream os;
  if (kind == Kind::Entry)
    os << "entry (" << i << "," << k << ") = " << value << " outside [0,1]";
  else
    os << "column " << k << " sums to " << value;
  return os.str();
}

std::string AllocationCheck::to_string() const {
  if (ok) return "ok";
  std::ostringstream os;
  os << "invalid allocation:";
  for (const auto& v : violations) os << " " << v.to_string() << ";";
  return os.str();
}

AllocationCheck validate_allocation(const FractionalAllocation& x, double tol) {
  if (!(tol > 0.0)) throw ValidationError("validate_allocation: tol must be > 0");
  AllocationCheck out;
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k) {
      double v = x(i, k);
      if (v < -tol || v > 1.0 + tol) {
        out.ok = false;
        out.violations.push_back({AllocationViolation::Kind::Entry, i, k, v});
      }
    }
  for (int k = 0; k < x.cols(); ++k) {
    double s = x.column_sum(k);
    if (std::abs(s - 1.0) > tol) {
      out.ok = false;
      out.violations.push_back({AllocationViolation::Kind::ColumnSum, -1, k, s});
    }
  }
  return out;
}

}  // namespace fairdiv
