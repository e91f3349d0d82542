#pragma once
// Conserved and scale-invariant quantities of a field.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "abnls/grid.hpp"
#include "abnls/magop.hpp"
#include "abnls/params.hpp"

namespace abnls {

inline double mass(const Field& u) {
  const auto& g = u.grid();
  const int nt = g.n_theta();
  double acc = 0.0;
  for (int j = 0; j < g.n_r(); ++j) {
    double row = 0.0;
    for (int k = 0; k < nt; ++k) row += std::norm(u(j, k));
    acc += g.w(j) * row;
  }
  return acc / nt;
}

/// int |x|^{-rho} |u|^{p+1} dx.
inline double potential(const Field& u, const PhysParams& prm) {
  const auto& g = u.grid();
  const int nt = g.n_theta();
  double acc = 0.0;
  for (int j = 0; j < g.n_r(); ++j) {
    double row = 0.0;
    for (int k = 0; k < nt; ++k) row += std::pow(std::abs(u(j, k)), prm.p + 1.0);
    acc += g.w(j) * std::pow(g.r(j), -prm.rho) * row;
  }
  return acc / nt;
}

/// Energy with the nonlinear sign made explicit: G + kappa * 2/(p+1) * P.
inline double energy_from(double grad_alpha, double pot, const PhysParams& prm) {
  return grad_alpha + prm.kappa * (2.0 / (prm.p + 1.0)) * pot;
}

inline double virial_from(double grad_alpha, double pot, const PhysParams& prm) {
  return grad_alpha - (prm.B() / (prm.p + 1.0)) * pot;
}

inline double energy(const Field& u, const PhysParams& prm) {
  return energy_from(grad_alpha_sq(u, prm), potential(u, prm), prm);
}

inline double virial_quantity(const Field& u, const PhysParams& prm) {
  return virial_from(grad_alpha_sq(u, prm), potential(u, prm), prm);
}

/// Functionals of the ground state that normalise the threshold ratios.
struct ReferenceFunctionals {
  PhysParams params;
  double mass = 0.0;
  double grad_alpha_sq = 0.0;
  double grad_sq = 0.0;
  double potential = 0.0;
  double energy = 0.0;  ///< focusing convention (kappa = -1)
  double k_opt = 0.0;
};

struct InvariantRatios {
  double EM, GM, PM;
};

namespace detail {

inline void require_same_physics(const PhysParams& a, const PhysParams& b) {
  if (a.alpha != b.alpha || a.rho != b.rho || a.p != b.p)
    throw ConfigError("ground state was computed for different (alpha, rho, p)");
}

}  // namespace detail

/// EM, GM and PM from precomputed functionals of u. GM uses the plain gradient.
inline InvariantRatios ratios_from(double M, double E, double grad_plain, double P, const ReferenceFunctionals& ref,
                                   const PhysParams& prm) {
  detail::require_same_physics(prm, ref.params);
  const double lc = prm.lambda_c();
  const double mr = M / ref.mass;
  return {(E / ref.energy) * std::pow(mr, lc), std::sqrt(grad_plain / ref.grad_sq) * std::pow(mr, lc / 2.0),
          (P / ref.potential) * std::pow(mr, lc)};
}

inline InvariantRatios invariant_ratios(const Field& u, const ReferenceFunctionals& ref, const PhysParams& prm) {
  const auto s = analyze(u);
  return ratios_from(mass(u), energy(u, prm), grad_sq(s), potential(u, prm), ref, prm);
}

/// One row of a trajectory. The ground-state ratios are present only when a
/// reference is attached.
struct FunctionalRecord {
  double t = 0.0;
  double M = 0.0;
  double E = 0.0;
  double P = 0.0;
  double Q = 0.0;
  double grad_alpha_sq = 0.0;
  double grad_sq = 0.0;
  std::optional<InvariantRatios> ratios;
  double V = 0.0;  ///< int |x|^2 |u|^2, used by the virial finite-difference check

  static constexpr const char* csv_header = "t,M,E,P,Q,grad_alpha_sq,grad_sq,EM,GM,PM,V";
};

inline FunctionalRecord evaluate(const Field& u, double t, const PhysParams& prm,
                                 const ReferenceFunctionals* ref = nullptr) {
  const auto s = analyze(u);
  FunctionalRecord rec;
  rec.t = t;
  rec.M = mass(u);
  rec.P = potential(u, prm);
  rec.grad_alpha_sq = grad_alpha_sq(s, prm);
  rec.grad_sq = grad_sq(s);
  rec.E = energy_from(rec.grad_alpha_sq, rec.P, prm);
  rec.Q = virial_from(rec.grad_alpha_sq, rec.P, prm);
  if (ref) rec.ratios = ratios_from(rec.M, rec.E, rec.grad_sq, rec.P, *ref, prm);
  const auto& g = u.grid();
  double v = 0.0;
  for (int j = 0; j < g.n_r(); ++j) {
    double row = 0.0;
    for (int k = 0; k < g.n_theta(); ++k) row += std::norm(u(j, k));
    v += g.w(j) * g.r(j) * g.r(j) * row;
  }
  rec.V = v / g.n_theta();
  return rec;
}

/// K_opt ||u||^A ||u||_{H^1_alpha}^B / P[u] - 1; +infinity when P vanishes.
inline double gn_deficit(const Field& u, const ReferenceFunctionals& ref, const PhysParams& prm) {
  detail::require_same_physics(prm, ref.params);
  const double P = potential(u, prm);
  if (!(P > 0.0)) return std::numeric_limits<double>::infinity();
  const double M = mass(u);
  const double G = grad_alpha_sq(u, prm);
  return ref.k_opt * std::pow(M, prm.A() / 2.0) * std::pow(G, prm.B() / 2.0) / P - 1.0;
}

/// Weinstein quotient J = M^{A/2} G^{B/2} / P.
inline double weinstein_from(double M, double G, double P, const PhysParams& prm) {
  return std::pow(M, prm.A() / 2.0) * std::pow(G, prm.B() / 2.0) / P;
}

/// Margin of the Q-coercivity bound, 1 - (1 - eps)^{(B-2)/B}.
inline double coercivity_margin(double eps, double B) { return 1.0 - std::pow(1.0 - eps, (B - 2.0) / B); }

struct CoercivityReport {
  double pm_margin = 0.0;        ///< eps with P M^{lc} = (1 - eps) P[phi] M[phi]^{lc}
  bool coer1_holds = false;      ///< P <= (p+1)/B (1-eps)^{(B-2)/B} G
  double coer2_value = 0.0;      ///< Q - c(eps, B) G, expected >= 0
  double coer2_margin = 0.0;     ///< c(eps, B)
  bool coer3_holds = false;      ///< E >= (B-2)/B G in the focusing case
  bool hypothesis_met = false;   ///< eps >= 0
};

inline CoercivityReport coercivity_report(const Field& u, const ReferenceFunctionals& ref, const PhysParams& prm) {
  detail::require_same_physics(prm, ref.params);
  const double lc = prm.lambda_c();
  const double B = prm.B();
  const double p1 = prm.p + 1.0;
  const double M = mass(u);
  const double P = potential(u, prm);
  const double G = grad_alpha_sq(u, prm);
  const double pm = (P * std::pow(M, lc)) / (ref.potential * std::pow(ref.mass, lc));
  CoercivityReport rep;
  rep.pm_margin = 1.0 - pm;
  rep.hypothesis_met = rep.pm_margin >= 0.0;
  const double slack = 1e-10;
  const double scale = std::max(G, P);
  rep.coer1_holds = P <= p1 / B * std::pow(std::max(pm, 0.0), (B - 2.0) / B) * G + slack * scale;
  rep.coer2_margin = coercivity_margin(rep.pm_margin, B);
  rep.coer2_value = virial_from(G, P, prm) - rep.coer2_margin * G;
  // Focusing energy, independent of the kappa used for time evolution.
  const double E = G - (2.0 / p1) * P;
  rep.coer3_holds = E >= (B - 2.0) / B * G - slack * scale;
  return rep;
}

}  // namespace abnls
