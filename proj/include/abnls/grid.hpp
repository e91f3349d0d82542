#pragma once
// Polar discretisation of the plane.
//
// Radial nodes are staggered, r_j = (j + 1/2) h with h = r_max / n_r, so the
// origin is never sampled. Radial quadrature is the midpoint rule with weights
// w_j = 2 pi r_j h; the angular direction uses n_theta = n_modes equispaced
// angles, where the trapezoid rule is exact for the resolved Fourier modes
// m = -M..M (n_modes = 2M + 1).

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "abnls/error.hpp"

namespace abnls {

using cplx = std::complex<double>;

class PolarGrid {
 public:
  PolarGrid() = default;

  PolarGrid(int n_r, double r_max, int n_modes) {
    detail::require(n_r >= 8, "grid: n_r must be >= 8 (got " + std::to_string(n_r) + ")");
    detail::require(std::isfinite(r_max) && r_max > 0.0, "grid: r_max must be positive");
    detail::require(n_modes >= 1, "grid: n_modes must be >= 1");
    detail::require(n_modes % 2 == 1,
                    "grid: n_modes must be odd (got " + std::to_string(n_modes) + ")");
    auto d = std::make_shared<Data>();
    d->n_r = n_r;
    d->n_modes = n_modes;
    d->r_max = r_max;
    d->h = r_max / n_r;
    d->nodes.resize(n_r);
    d->weights.resize(n_r);
    for (int j = 0; j < n_r; ++j) {
      d->nodes[j] = (j + 0.5) * d->h;
      d->weights[j] = 2.0 * std::numbers::pi * d->nodes[j] * d->h;
    }
    const int nt = n_modes;
    d->twiddle.resize(static_cast<std::size_t>(nt) * nt);
    for (int k = 0; k < nt; ++k) {
      for (int mi = 0; mi < nt; ++mi) {
        const int m = mi - (nt - 1) / 2;
        // Reduce the phase index exactly before converting to an angle.
        const long idx = ((static_cast<long>(m) * k) % nt + nt) % nt;
        const double th = 2.0 * std::numbers::pi * static_cast<double>(idx) / nt;
        d->twiddle[static_cast<std::size_t>(k) * nt + mi] = cplx(std::cos(th), std::sin(th));
      }
    }
    data_ = std::move(d);
  }

  int n_r() const { return data_->n_r; }
  int n_modes() const { return data_->n_modes; }
  int n_theta() const { return data_->n_modes; }
  /// Largest resolved |m|.
  int max_mode() const { return (data_->n_modes - 1) / 2; }
  double r_max() const { return data_->r_max; }
  double h() const { return data_->h; }
  std::span<const double> nodes() const { return data_->nodes; }
  std::span<const double> weights() const { return data_->weights; }
  double r(int j) const { return data_->nodes[j]; }
  double w(int j) const { return data_->weights[j]; }
  double theta(int k) const { return 2.0 * std::numbers::pi * k / data_->n_modes; }
  std::size_t size() const { return static_cast<std::size_t>(n_r()) * n_theta(); }

  /// e^{i m theta_k}, mode index mi = m + M.
  cplx twiddle(int k, int mi) const {
    return data_->twiddle[static_cast<std::size_t>(k) * data_->n_modes + mi];
  }

  bool valid() const { return static_cast<bool>(data_); }

  friend bool operator==(const PolarGrid& a, const PolarGrid& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return a.n_r() == b.n_r() && a.n_modes() == b.n_modes() && a.r_max() == b.r_max();
  }

 private:
  struct Data {
    int n_r = 0;
    int n_modes = 0;
    double r_max = 0.0;
    double h = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<cplx> twiddle;
  };
  std::shared_ptr<const Data> data_;
};

inline PolarGrid make_grid(int n_r, double r_max, int n_modes) {
  return PolarGrid(n_r, r_max, n_modes);
}

/// Same radial discretisation, different angular resolution.
inline PolarGrid with_modes(const PolarGrid& g, int n_modes) {
  return PolarGrid(g.n_r(), g.r_max(), n_modes);
}

/// Complex samples u(r_j, theta_k), row-major in j.
class Field {
 public:
  Field() = default;
  explicit Field(PolarGrid grid) : grid_(std::move(grid)), values_(grid_.size()) {}
  Field(PolarGrid grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values)) {
    detail::require(values_.size() == grid_.size(), "field: sample count does not match grid");
  }

  template <class F>
  static Field from_function(const PolarGrid& grid, F&& f) {
    Field u(grid);
    for (int j = 0; j < grid.n_r(); ++j)
      for (int k = 0; k < grid.n_theta(); ++k) u(j, k) = cplx(f(grid.r(j), grid.theta(k)));
    return u;
  }

  /// Radial profile repeated over all angles.
  static Field radial(const PolarGrid& grid, std::span<const double> profile) {
    detail::require(profile.size() == static_cast<std::size_t>(grid.n_r()),
                    "field: radial profile length does not match grid");
    Field u(grid);
    for (int j = 0; j < grid.n_r(); ++j)
      for (int k = 0; k < grid.n_theta(); ++k) u(j, k) = profile[j];
    return u;
  }

  const PolarGrid& grid() const { return grid_; }
  cplx& operator()(int j, int k) { return values_[static_cast<std::size_t>(j) * grid_.n_theta() + k]; }
  cplx operator()(int j, int k) const {
    return values_[static_cast<std::size_t>(j) * grid_.n_theta() + k];
  }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

  bool finite() const {
    for (const auto& z : values_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  Field& operator*=(cplx c) {
    for (auto& z : values_) z *= c;
    return *this;
  }
  friend Field operator*(cplx c, Field u) { return u *= c; }

  Field& operator+=(const Field& o) {
    detail::require(grid_ == o.grid_, "field: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    detail::require(grid_ == o.grid_, "field: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator+(Field a, const Field& b) { return a += b; }

 private:
  PolarGrid grid_;
  std::vector<cplx> values_;
};

/// Per-angular-mode radial coefficients g_m(r_j), m = -M..M.
class ModeStack {
 public:
  ModeStack() = default;
  explicit ModeStack(PolarGrid grid)
      : grid_(std::move(grid)), modes_(grid_.n_modes(), std::vector<cplx>(grid_.n_r())) {}

  const PolarGrid& grid() const { return grid_; }
  int max_mode() const { return grid_.max_mode(); }
  /// Mode by angular number m.
  std::vector<cplx>& mode(int m) { return modes_.at(m + max_mode()); }
  const std::vector<cplx>& mode(int m) const { return modes_.at(m + max_mode()); }

  template <class Fn>
  void for_each_mode(Fn&& fn) const {
    for (int m = -max_mode(); m <= max_mode(); ++m) fn(m, std::span<const cplx>(mode(m)));
  }

 private:
  PolarGrid grid_;
  std::vector<std::vector<cplx>> modes_;
};

/// g_m(r_j) = (1/n_theta) sum_k u(r_j, theta_k) e^{-i m theta_k}.
inline ModeStack analyze(const Field& u) {
  const auto& g = u.grid();
  ModeStack s(g);
  const int nt = g.n_theta();
  const int M = g.max_mode();
  for (int mi = 0; mi < nt; ++mi) {
    auto& gm = s.mode(mi - M);
    for (int j = 0; j < g.n_r(); ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < nt; ++k) acc += u(j, k) * std::conj(g.twiddle(k, mi));
      gm[j] = acc / static_cast<double>(nt);
    }
  }
  return s;
}

inline Field synthesize(const ModeStack& s) {
  const auto& g = s.grid();
  Field u(g);
  const int nt = g.n_theta();
  const int M = g.max_mode();
  for (int j = 0; j < g.n_r(); ++j) {
    for (int k = 0; k < nt; ++k) {
      cplx acc = 0.0;
      for (int mi = 0; mi < nt; ++mi) acc += s.mode(mi - M)[j] * g.twiddle(k, mi);
      u(j, k) = acc;
    }
  }
  return u;
}

/// sum_{j,k} w_j / n_theta * samples(j,k), samples row-major like Field.
template <class T>
T integrate(std::span<const T> samples, const PolarGrid& grid) {
  detail::require(samples.size() == grid.size(), "integrate: sample count does not match grid");
  T acc{};
  const int nt = grid.n_theta();
  for (int j = 0; j < grid.n_r(); ++j) {
    T row{};
    for (int k = 0; k < nt; ++k) row += samples[static_cast<std::size_t>(j) * nt + k];
    acc += grid.w(j) * row;
  }
  return acc / static_cast<double>(nt);
}

template <class T>
T integrate(const std::vector<T>& samples, const PolarGrid& grid) {
  return integrate(std::span<const T>(samples), grid);
}

/// Radial integral sum_j w_j f(r_j) for a per-node quantity.
template <class T>
T integrate_radial(std::span<const T> per_node, const PolarGrid& grid) {
  detail::require(per_node.size() == static_cast<std::size_t>(grid.n_r()),
                  "integrate_radial: length does not match grid");
  T acc{};
  for (int j = 0; j < grid.n_r(); ++j) acc += grid.w(j) * per_node[j];
  return acc;
}

/// Mode-space mass: sum_j w_j sum_m |g_m(r_j)|^2 (Parseval partner of the field mass).
inline double integrate_modes_sq(const ModeStack& s) {
  double acc = 0.0;
  const auto& g = s.grid();
  s.for_each_mode([&](int, std::span<const cplx> gm) {
    for (int j = 0; j < g.n_r(); ++j) acc += g.w(j) * std::norm(gm[j]);
  });
  return acc;
}

/// Same samples on the grid dilated by 1/mu: the result represents c * u(mu x).
inline Field dilate(const Field& u, double amplitude, double mu) {
  detail::require(mu > 0.0, "dilate: mu must be positive");
  const auto& g = u.grid();
  PolarGrid scaled(g.n_r(), g.r_max() / mu, g.n_modes());
  std::vector<cplx> v(u.values().begin(), u.values().end());
  for (auto& z : v) z *= amplitude;
  return Field(scaled, std::move(v));
}

}  // namespace abnls
