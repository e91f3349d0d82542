#pragma once
// Tridiagonal matrices stored by diagonals and a factor-once Thomas solver.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "abnls/error.hpp"

namespace abnls {

/// Row j reads lower[j] x[j-1] + diag[j] x[j] + upper[j] x[j+1].
/// lower[0] and upper[n-1] are unused and kept at zero.
template <class T>
struct Tridiagonal {
  std::vector<T> lower, diag, upper;

  Tridiagonal() = default;
  explicit Tridiagonal(std::size_t n) : lower(n), diag(n), upper(n) {}

  std::size_t size() const { return diag.size(); }

  template <class V>
  std::vector<V> apply(std::span<const V> x) const {
    const std::size_t n = size();
    detail::require(x.size() == n, "tridiagonal: vector length mismatch");
    std::vector<V> y(n);
    for (std::size_t j = 0; j < n; ++j) {
      V acc = diag[j] * x[j];
      if (j > 0) acc += lower[j] * x[j - 1];
      if (j + 1 < n) acc += upper[j] * x[j + 1];
      y[j] = acc;
    }
    return y;
  }

  friend bool operator==(const Tridiagonal&, const Tridiagonal&) = default;
};

/// LU factors of a tridiagonal matrix without pivoting. Valid for the
/// diagonally dominant or definite systems that arise here; a vanishing pivot
/// raises NumericalError.
template <class T>
class ThomasFactor {
 public:
  ThomasFactor() = default;
  explicit ThomasFactor(const Tridiagonal<T>& a) : lower_(a.lower), inv_pivot_(a.size()), upper_(a.upper) {
    const std::size_t n = a.size();
    T prev_ratio{};  // upper[j-1] / pivot[j-1]
    for (std::size_t j = 0; j < n; ++j) {
      T piv = a.diag[j];
      if (j > 0) piv -= a.lower[j] * prev_ratio;
      if (std::abs(piv) == 0.0 || !std::isfinite(std::abs(piv)))
        throw NumericalError("tridiagonal solve: singular pivot");
      inv_pivot_[j] = T(1) / piv;
      prev_ratio = (j + 1 < n) ? a.upper[j] * inv_pivot_[j] : T{};
    }
  }

  template <class V>
  std::vector<V> solve(std::span<const V> b) const {
    const std::size_t n = inv_pivot_.size();
    detail::require(b.size() == n, "tridiagonal: right-hand side length mismatch");
    std::vector<V> y(n);
    for (std::size_t j = 0; j < n; ++j) {
      V acc = b[j];
      if (j > 0) acc -= lower_[j] * y[j - 1];
      y[j] = acc * inv_pivot_[j];
    }
    for (std::size_t j = n - 1; j-- > 0;) y[j] -= upper_[j] * inv_pivot_[j] * y[j + 1];
    return y;
  }

 private:
  std::vector<T> lower_, inv_pivot_, upper_;
};

}  // namespace abnls
