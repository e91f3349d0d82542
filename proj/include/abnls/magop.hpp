#pragma once
// The Aharonov-Bohm operator restricted to one angular mode,
//
//   L g = -(1/r)(r g')' + nu^2 g / r^2,   nu = |m + alpha|,
//
// discretised in the indicial variable v = g / r^nu, where it becomes the
// divergence form  L g = -r^{-nu-1} (r^{2nu+1} v')'. On the staggered grid the
// flux lives on the faces f_j = (j+1) h with coefficient f_j^{2nu+1}; the face
// at the origin has coefficient zero, and the outer face carries the
// Dirichlet condition through the antisymmetric ghost g_n = -g_{n-1}.
// Writing the stencil this way keeps second-order accuracy for solutions
// that behave like r^nu near the origin, and it is symmetric in the
// weighted inner product <a, b>_w = sum_j w_j a_j conj(b_j).
//
// Every coefficient is formed from ratios (f/r)^k so that high modes do not
// overflow.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "abnls/error.hpp"
#include "abnls/grid.hpp"
#include "abnls/params.hpp"
#include "abnls/tridiag.hpp"

namespace abnls {

/// Effective Bessel order of mode m under flux alpha. The integer part of
/// alpha is folded into m first so that (m, alpha + 1) and (m + 1, alpha)
/// give bitwise identical orders.
inline double mode_order(int m, double alpha) {
  const double whole = std::floor(alpha);
  const double frac = alpha - whole;
  return std::abs((static_cast<double>(m) + whole) + frac);
}

/// Tridiagonal stencil of L for a given effective order nu.
inline Tridiagonal<double> mode_stencil(double nu, const PolarGrid& grid) {
  const int n = grid.n_r();
  const double h = grid.h();
  const double ih2 = 1.0 / (h * h);
  Tridiagonal<double> t(n);
  auto face = [h](int j) { return (j + 1) * h; };
  for (int j = 0; j < n; ++j) {
    const double rj = grid.r(j);
    double d = std::pow(face(j) / rj, 2.0 * nu + 1.0);
    if (j > 0) d += std::pow(face(j - 1) / rj, 2.0 * nu + 1.0);
    if (j == n - 1) {
      const double r_ghost = (n + 0.5) * h;
      d += std::pow(face(j) / rj, 2.0 * nu + 1.0) * std::pow(rj / r_ghost, nu);
    }
    t.diag[j] = d * ih2;
    if (j + 1 < n) {
      const double f = face(j);
      t.upper[j] = -std::pow(f / rj, nu + 1.0) * std::pow(f / grid.r(j + 1), nu) * ih2;
    }
    if (j > 0) {
      const double f = face(j - 1);
      t.lower[j] = -std::pow(f / rj, nu + 1.0) * std::pow(f / grid.r(j - 1), nu) * ih2;
    }
  }
  return t;
}

/// L_{m,alpha} on one radial vector.
class ModeOperator {
 public:
  ModeOperator(int m, double alpha, const PolarGrid& grid)
      : m_(m), nu_(mode_order(m, alpha)), grid_(grid), stencil_(mode_stencil(nu_, grid)) {}

  int mode() const { return m_; }
  double order() const { return nu_; }
  const Tridiagonal<double>& stencil() const { return stencil_; }
  const PolarGrid& grid() const { return grid_; }

  template <class V>
  std::vector<V> apply(std::span<const V> g) const {
    detail::require(g.size() == static_cast<std::size_t>(grid_.n_r()),
                    "mode operator: vector length does not match grid");
    return stencil_.apply(g);
  }
  template <class V>
  std::vector<V> apply(const std::vector<V>& g) const {
    return apply(std::span<const V>(g));
  }

  /// <L g, g>_w as a sum of squared face differences (nonnegative by construction).
  template <class V>
  double quadratic_form(std::span<const V> g) const {
    return face_form(nu_, g, grid_);
  }

  /// Same form computed for an arbitrary order, used for the non-magnetic gradient.
  template <class V>
  static double face_form(double nu, std::span<const V> g, const PolarGrid& grid) {
    return weighted_face_form(nu, g, grid, [](double) { return 1.0; });
  }

  /// sum over faces of c(f) * f * |difference|^2; c is evaluated at face radii,
  /// including the outer Dirichlet face.
  template <class V, class FaceCoef>
  static double weighted_face_form(double nu, std::span<const V> g, const PolarGrid& grid, FaceCoef&& coef) {
    const int n = grid.n_r();
    detail::require(g.size() == static_cast<std::size_t>(n), "quadratic form: length mismatch");
    const double h = grid.h();
    double acc = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      const double f = (j + 1) * h;
      const V diff = g[j + 1] * std::pow(f / grid.r(j + 1), nu) - g[j] * std::pow(f / grid.r(j), nu);
      acc += coef(f) * f * std::norm(diff);
    }
    const double f = n * h;
    const double rl = grid.r(n - 1);
    const double ghost = std::pow(rl / ((n + 0.5) * h), nu);
    acc += coef(f) * f * std::pow(f / rl, 2.0 * nu) * (1.0 + ghost) * std::norm(g[n - 1]);
    return 2.0 * std::numbers::pi * acc / h;
  }

 private:
  int m_;
  double nu_;
  PolarGrid grid_;
  Tridiagonal<double> stencil_;
};

/// Image of one radial vector under L_{m,alpha}.
inline std::vector<cplx> apply_mode_operator(std::span<const cplx> g, int m, const PhysParams& prm,
                                             const PolarGrid& grid) {
  return ModeOperator(m, prm.alpha, grid).apply(g);
}

/// The full operator applied mode by mode.
inline ModeStack apply_operator(const ModeStack& s, const PhysParams& prm) {
  const auto& g = s.grid();
  ModeStack out(g);
  for (int m = -s.max_mode(); m <= s.max_mode(); ++m)
    out.mode(m) = ModeOperator(m, prm.alpha, g).apply(s.mode(m));
  return out;
}

/// ||grad_alpha u||^2 = sum_m <L_{m,alpha} g_m, g_m>_w.
inline double grad_alpha_sq(const ModeStack& s, const PhysParams& prm) {
  double acc = 0.0;
  s.for_each_mode([&](int m, std::span<const cplx> gm) {
    acc += ModeOperator::face_form(mode_order(m, prm.alpha), gm, s.grid());
  });
  return acc;
}
inline double grad_alpha_sq(const Field& u, const PhysParams& prm) { return grad_alpha_sq(analyze(u), prm); }

/// Non-magnetic ||grad u||^2: the same discretisation with alpha = 0.
inline double grad_sq(const ModeStack& s) {
  double acc = 0.0;
  s.for_each_mode([&](int m, std::span<const cplx> gm) {
    acc += ModeOperator::face_form(mode_order(m, 0.0), gm, s.grid());
  });
  return acc;
}
inline double grad_sq(const Field& u) { return grad_sq(analyze(u)); }

struct HardyPair {
  double lhs;  ///< dist(alpha, Z)^2 * int |u|^2 / |x|^2
  double rhs;  ///< ||grad_alpha u||^2
  bool holds(double rel_tol = 1e-12) const { return lhs <= rhs * (1.0 + rel_tol); }
};

inline HardyPair hardy_check(const ModeStack& s, const PhysParams& prm) {
  const auto& g = s.grid();
  double weighted = 0.0;
  s.for_each_mode([&](int, std::span<const cplx> gm) {
    for (int j = 0; j < g.n_r(); ++j) weighted += g.w(j) * std::norm(gm[j]) / (g.r(j) * g.r(j));
  });
  const double d = prm.flux_distance();
  return {d * d * weighted, grad_alpha_sq(s, prm)};
}
inline HardyPair hardy_check(const Field& u, const PhysParams& prm) { return hardy_check(analyze(u), prm); }

/// Matrix action in the weighted inner product.
template <class V>
V weighted_inner(std::span<const V> a, std::span<const V> b, const PolarGrid& grid) {
  V acc{};
  for (int j = 0; j < grid.n_r(); ++j) {
    if constexpr (std::is_same_v<V, cplx>)
      acc += grid.w(j) * a[j] * std::conj(b[j]);
    else
      acc += grid.w(j) * a[j] * b[j];
  }
  return acc;
}

/// Lowest eigenvalue of the mode stencil by inverse iteration.
inline double smallest_eigenvalue(int m, const PhysParams& prm, const PolarGrid& grid, double tol = 1e-10,
                                  int max_iters = 2000) {
  const ModeOperator op(m, prm.alpha, grid);
  const ThomasFactor<double> lu(op.stencil());
  const int n = grid.n_r();
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) {
    const double r = grid.r(j);
    x[j] = std::pow(r, op.order()) * (grid.r_max() - r);  // positive, vanishes at the outer wall
  }
  double lam_prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    auto y = lu.solve(std::span<const double>(x));
    const double nrm = std::sqrt(weighted_inner<double>(y, y, grid));
    for (auto& v : y) v /= nrm;
    const auto ly = op.apply(y);
    const double lam = weighted_inner<double>(ly, y, grid);
    x = std::move(y);
    if (it > 0 && std::abs(lam - lam_prev) <= tol * std::abs(lam)) return lam;
    lam_prev = lam;
  }
  throw NumericalError("smallest_eigenvalue: inverse iteration did not converge");
}

}  // namespace abnls
