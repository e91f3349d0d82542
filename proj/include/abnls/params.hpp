#pragma once

#include <cmath>
#include <string>

#include "abnls/error.hpp"

namespace abnls {

/// Distance from x to the nearest integer.
inline double dist_to_integer(double x) { return std::abs(x - std::nearbyint(x)); }

/// Scaling exponents shared by the functionals.
struct CriticalConstants {
  double s_c;       ///< critical Sobolev index 1 - (2 - rho)/(p - 1)
  double lambda_c;  ///< mass exponent in the scale-invariant ratios
  double A;         ///< mass exponent of the Weinstein functional, 2 - rho
  double B;         ///< gradient exponent, p - 1 + rho
};

/// Flux alpha, inhomogeneity rho, power p and sign kappa (-1 focusing, +1 defocusing).
struct PhysParams {
  double alpha = 0.5;
  double rho = 0.5;
  double p = 3.0;
  int kappa = -1;

  void validate() const {
    detail::require(std::isfinite(alpha), "params: alpha must be finite");
    detail::require(rho >= 0.0 && rho < 2.0, "params: rho must lie in [0, 2)");
    detail::require(p > 1.0 && std::isfinite(p), "params: p must be > 1");
    detail::require(kappa == 1 || kappa == -1, "params: kappa must be +1 or -1");
  }

  double B() const { return p - 1.0 + rho; }
  double A() const { return 1.0 + p - B(); }
  double s_c() const { return 1.0 - (2.0 - rho) / (p - 1.0); }
  double flux_distance() const { return dist_to_integer(alpha); }
  bool mass_critical() const { return std::abs(p - (3.0 - rho)) < 1e-12; }

  /// Requires p above the mass-critical power 3 - rho.
  double lambda_c() const {
    if (mass_critical()) throw ConfigError("mass-critical: lambda_c undefined (p = 3 - rho)");
    return (2.0 - rho) / (p + rho - 3.0);
  }

  /// True in the regime covered by the dichotomy theory: non-integer flux,
  /// 0 < rho < 1 and an inter-critical power.
  bool threshold_regime() const {
    return flux_distance() > 0.0 && rho > 0.0 && rho < 1.0 && p > 3.0 - rho;
  }

  friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

inline CriticalConstants critical_constants(const PhysParams& prm) {
  return {prm.s_c(), prm.lambda_c(), prm.A(), prm.B()};
}

}  // namespace abnls
