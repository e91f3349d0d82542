#pragma once
// Virial and Morawetz machinery on top of recorded trajectories.
//
// For a radial weight b the localized virial V_b = int b |u|^2 satisfies
//
//   V_b'' = -int D^4 b |u|^2 + 4 int grad_a u . D^2 b . conj(grad_a u)
//           - kappa [ -2(p-1)/(p+1) int Lap b |x|^-rho |u|^{p+1}
//                     + 4/(p+1) int grad b . grad |x|^-rho |u|^{p+1} ],
//
// where D^4 b is the bilaplacian. The sign convention is chosen so that the
// focusing case kappa = -1 with b = |x|^2 gives V'' = 8 Q[u].

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/polynomial.hpp>

#include "abnls/error.hpp"
#include "abnls/evolve.hpp"
#include "abnls/fit.hpp"
#include "abnls/functionals.hpp"
#include "abnls/grid.hpp"
#include "abnls/magop.hpp"
#include "abnls/params.hpp"

namespace abnls {

using Polynomial = boost::math::tools::polynomial<double>;

enum class WeightKind { quadratic, morawetz, blowup, bump };

inline const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::quadratic: return "quadratic";
    case WeightKind::morawetz: return "morawetz_f_R";
    case WeightKind::blowup: return "blowup_b_R";
    case WeightKind::bump: return "bump_psi_R";
  }
  return "unknown";
}

inline WeightKind parse_weight_kind(const std::string& s) {
  if (s == "quadratic") return WeightKind::quadratic;
  if (s == "morawetz_f_R" || s == "morawetz") return WeightKind::morawetz;
  if (s == "blowup_b_R" || s == "blowup") return WeightKind::blowup;
  if (s == "bump_psi_R" || s == "bump") return WeightKind::bump;
  throw ConfigError("unknown weight kind '" + s + "'");
}

namespace detail {

// Smoothstep polynomials on [0, 1]: degree 5 has two vanishing derivatives at
// both ends, degree 7 has three.
inline Polynomial smoothstep5() { return Polynomial{{0.0, 0.0, 0.0, 10.0, -15.0, 6.0}}; }
inline Polynomial smoothstep7() { return Polynomial{{0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0}}; }

/// A polynomial in t = (x - start) / length, valid for x >= start up to the next piece.
struct Piece {
  double start;
  double length;
  Polynomial poly;
};

}  // namespace detail

/// Piecewise-polynomial radial weight b_R(r) = R^s b(r / R).
class RadialWeight {
 public:
  static RadialWeight quadratic() {
    RadialWeight w(WeightKind::quadratic, 1.0, 0);
    w.pieces_.push_back({0.0, 1.0, Polynomial{{0.0, 0.0, 1.0}}});
    return w;
  }

  /// r^2 inside R, affine 3 R r + const beyond 2R, convex in between. The
  /// bridge takes f'' = 2 (1 - S(t)) with S the degree-7 smoothstep, hence
  /// f' rises from 2R to 3R.
  static RadialWeight morawetz(double R) {
    RadialWeight w(WeightKind::morawetz, R, 2);
    w.pieces_.push_back({0.0, 1.0, Polynomial{{0.0, 0.0, 1.0}}});
    const Polynomial f2 = 2.0 * (Polynomial{{1.0}} - detail::smoothstep7());
    const Polynomial f1 = f2.integrate() + Polynomial{{2.0}};
    const Polynomial f0 = f1.integrate() + Polynomial{{1.0}};
    w.pieces_.push_back({1.0, 1.0, f0});
    w.pieces_.push_back({2.0, 1.0, Polynomial{{f0(1.0), 3.0}}});
    return w;
  }

  /// r^2/2 inside R, constant beyond 2R; the bridge b' = r (1 - S(r - 1))
  /// keeps b'' <= 1, b' <= r and Lap b <= 2 exactly.
  static RadialWeight blowup(double R) {
    RadialWeight w(WeightKind::blowup, R, 2);
    w.pieces_.push_back({0.0, 1.0, Polynomial{{0.0, 0.0, 0.5}}});
    const Polynomial b1 = Polynomial{{1.0, 1.0}} * (Polynomial{{1.0}} - detail::smoothstep5());
    const Polynomial b0 = b1.integrate() + Polynomial{{0.5}};
    w.pieces_.push_back({1.0, 1.0, b0});
    w.pieces_.push_back({2.0, 1.0, Polynomial{{b0(1.0)}}});
    return w;
  }

  /// 1 on B(R/2), 0 outside B(R).
  static RadialWeight bump(double R) {
    RadialWeight w(WeightKind::bump, R, 0);
    w.pieces_.push_back({0.0, 0.5, Polynomial{{1.0}}});
    w.pieces_.push_back({0.5, 0.5, Polynomial{{1.0}} - detail::smoothstep5()});
    w.pieces_.push_back({1.0, 1.0, Polynomial{{0.0}}});
    return w;
  }

  static RadialWeight make(WeightKind kind, double R) {
    switch (kind) {
      case WeightKind::quadratic: return quadratic();
      case WeightKind::morawetz: return morawetz(R);
      case WeightKind::blowup: return blowup(R);
      case WeightKind::bump: return bump(R);
    }
    throw ConfigError("unknown weight kind");
  }

  WeightKind kind() const { return kind_; }
  double radius() const { return R_; }

  /// k-th radial derivative at r (k = 0..4).
  double derivative(double r, int k) const {
    const double x = r / R_;
    const detail::Piece* piece = &pieces_.front();
    for (const auto& p : pieces_)
      if (x >= p.start) piece = &p;
    Polynomial q = piece->poly;
    for (int i = 0; i < k; ++i) q = q.prime();
    const double t = (x - piece->start) / piece->length;
    return q(t) * std::pow(piece->length, -k) * std::pow(R_, scale_ - k);
  }
  double value(double r) const { return derivative(r, 0); }

  double laplacian(double r) const { return derivative(r, 2) + derivative(r, 1) / r; }
  double bilaplacian(double r) const {
    const double b1 = derivative(r, 1), b2 = derivative(r, 2), b3 = derivative(r, 3), b4 = derivative(r, 4);
    return b4 + 2.0 * b3 / r - b2 / (r * r) + b1 / (r * r * r);
  }

  /// Derivatives sampled at the radial nodes of a grid.
  struct Samples {
    std::vector<double> b, d1, d2, d3, lap, bilap;
  };
  Samples sample(const PolarGrid& g) const {
    Samples s;
    for (int j = 0; j < g.n_r(); ++j) {
      const double r = g.r(j);
      s.b.push_back(value(r));
      s.d1.push_back(derivative(r, 1));
      s.d2.push_back(derivative(r, 2));
      s.d3.push_back(derivative(r, 3));
      s.lap.push_back(laplacian(r));
      s.bilap.push_back(bilaplacian(r));
    }
    return s;
  }

 private:
  RadialWeight(WeightKind kind, double R, int scale) : kind_(kind), R_(R), scale_(scale) {
    detail::require(R > 0.0 && std::isfinite(R), "weight: R must be positive");
  }

  WeightKind kind_;
  double R_;
  int scale_;
  std::vector<detail::Piece> pieces_;
};

namespace detail {

/// sum_j w_j c_j sum_k |u(r_j, theta_k)|^q / n_theta
template <class Coef>
double radial_moment(const Field& u, double q, Coef&& c) {
  const auto& g = u.grid();
  const int nt = g.n_theta();
  double acc = 0.0;
  for (int j = 0; j < g.n_r(); ++j) {
    const double cj = c(j);
    if (cj == 0.0) continue;
    double row = 0.0;
    for (int k = 0; k < nt; ++k) row += q == 2.0 ? std::norm(u(j, k)) : std::pow(std::abs(u(j, k)), q);
    acc += g.w(j) * cj * row;
  }
  return acc / nt;
}

}  // namespace detail

/// V_b = int b(|x|) |u|^2 dx.
inline double virial_value(const Field& u, const RadialWeight& w) {
  const auto& g = u.grid();
  return detail::radial_moment(u, 2.0, [&](int j) { return w.value(g.r(j)); });
}

/// int grad_a u . D^2 b . conj(grad_a u) dx, split per mode into a radial part
/// b'' |g'|^2 and an angular part (b'/r) nu^2 |g|^2 / r^2. The radial part is
/// written through the same face differences as the gradient norm,
///   int b'' (|g'|^2 + nu^2 |g|^2/r^2) r dr = int b'' r^{2nu+1} |v'|^2 dr - nu int b''' |g|^2 dr,
/// so a constant b'' reproduces b'' ||grad_a u||^2 exactly.
inline double hessian_form(const ModeStack& s, const RadialWeight& w, const PhysParams& prm) {
  const auto& g = s.grid();
  const auto smp = w.sample(g);
  double acc = 0.0;
  s.for_each_mode([&](int m, std::span<const cplx> gm) {
    const double nu = mode_order(m, prm.alpha);
    acc += ModeOperator::weighted_face_form(nu, gm, g, [&](double f) { return w.derivative(f, 2); });
    double correction = 0.0, angular = 0.0;
    for (int j = 0; j < g.n_r(); ++j) {
      const double r = g.r(j);
      const double a = std::norm(gm[j]);
      correction += g.w(j) * smp.d3[j] * a / r;
      angular += g.w(j) * (smp.d1[j] / r - smp.d2[j]) * a / (r * r);
    }
    acc += -nu * correction + nu * nu * angular;
  });
  return acc;
}

/// Right side of the localized virial identity (see the header comment).
inline double virial_second_derivative(const Field& u, const RadialWeight& w, const PhysParams& prm) {
  prm.validate();
  const auto& g = u.grid();
  const auto smp = w.sample(g);
  const double pp1 = prm.p + 1.0;
  const double bilap = detail::radial_moment(u, 2.0, [&](int j) { return smp.bilap[j]; });
  const double hess = hessian_form(analyze(u), w, prm);
  const double lap_term = detail::radial_moment(u, pp1, [&](int j) {
    return smp.lap[j] * std::pow(g.r(j), -prm.rho);
  });
  // grad b . grad |x|^-rho = -rho b' |x|^{-rho-1}
  const double drift_term = detail::radial_moment(u, pp1, [&](int j) {
    return -prm.rho * smp.d1[j] * std::pow(g.r(j), -prm.rho - 1.0);
  });
  const double nonlinear = -(2.0 * (prm.p - 1.0) / pp1) * lap_term + (4.0 / pp1) * drift_term;
  return -bilap + 4.0 * hess - prm.kappa * nonlinear;
}

// ---------------------------------------------------------------------------
// Monitor reports

enum class Verdict { holds, violated, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

/// Outcome of one monitor: a verdict plus the numbers it was based on, kept in
/// insertion order so that serialisation is stable.
struct MonitorReport {
  std::string monitor;
  Verdict verdict = Verdict::inconclusive;
  std::string summary;
  std::vector<std::pair<std::string, double>> evidence;
  std::vector<std::string> notes;

  void add(std::string key, double value) { evidence.emplace_back(std::move(key), value); }
  std::optional<double> find(const std::string& key) const {
    for (const auto& [k, v] : evidence)
      if (k == key) return v;
    return std::nullopt;
  }
  std::string verdict_line() const { return monitor + ": " + to_string(verdict) + " (" + summary + ")"; }
};

// ---------------------------------------------------------------------------
// Morawetz growth

struct MorawetzOptions {
  int levels = 4;          ///< dyadic times T = t_end / 2^k for k = 0..levels
  double slack = 0.1;      ///< verdict holds iff slope <= 1/(1+rho) + slack
};

/// Cumulative trapezoid integral of P over the records, evaluated at time T by
/// linear interpolation.
inline double cumulative_potential(const std::vector<FunctionalRecord>& recs, double T) {
  double acc = 0.0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double t0 = recs[i - 1].t, t1 = recs[i].t;
    if (T <= t0) break;
    const double te = std::min(T, t1);
    const double frac = (te - t0) / (t1 - t0);
    const double pe = recs[i - 1].P + frac * (recs[i].P - recs[i - 1].P);
    acc += 0.5 * (recs[i - 1].P + pe) * (te - t0);
  }
  return acc;
}

inline MonitorReport morawetz_growth(const std::vector<FunctionalRecord>& recs, const PhysParams& prm,
                                     const MorawetzOptions& opt = {}) {
  MonitorReport rep;
  rep.monitor = "morawetz";
  const double bound = 1.0 / (1.0 + prm.rho) + opt.slack;
  rep.add("bound", bound);
  if (recs.size() < 2) {
    rep.summary = "too few records";
    return rep;
  }
  const double t_end = recs.back().t;
  std::vector<double> ts, cs;
  for (int k = opt.levels; k >= 0; --k) {
    const double T = t_end / std::pow(2.0, k);
    if (T < recs[1].t) continue;  // need at least one interval below T
    const double c = cumulative_potential(recs, T);
    if (c > 0.0) {
      ts.push_back(T);
      cs.push_back(c);
    }
  }
  rep.add("points", static_cast<double>(ts.size()));
  if (ts.size() < 3) {
    rep.summary = "fewer than three dyadic times with positive integral";
    return rep;
  }
  const auto fit = fit_loglog(ts, cs);
  rep.add("slope", fit.slope);
  rep.add("T_min", ts.front());
  rep.add("T_max", ts.back());
  rep.add("integral_T_max", cs.back());
  rep.verdict = fit.slope <= bound ? Verdict::holds : Verdict::violated;
  rep.summary = "slope " + std::to_string(fit.slope) + " vs bound " + std::to_string(bound);
  return rep;
}

inline MonitorReport morawetz_growth(const Trajectory& traj, const PhysParams& prm, const MorawetzOptions& opt = {}) {
  if (traj.reason != StopReason::completed) {
    MonitorReport rep;
    rep.monitor = "morawetz";
    rep.summary = std::string("run stopped early: ") + to_string(traj.reason);
    return rep;
  }
  return morawetz_growth(traj.records, prm, opt);
}

// ---------------------------------------------------------------------------
// Vanishing sequence

struct VanishingPoint {
  double t;
  double R;
  double localized;  ///< int_{B(R)} |x|^-rho |u(t)|^{p+1}
};

/// int_{|x|<R} |x|^-rho |u|^{p+1} dx over nodes inside the ball.
inline double localized_potential(const Field& u, double R, const PhysParams& prm) {
  const auto& g = u.grid();
  return detail::radial_moment(u, prm.p + 1.0,
                               [&](int j) { return g.r(j) < R ? std::pow(g.r(j), -prm.rho) : 0.0; });
}

/// int_{|x|<R} |u|^2 dx.
inline double local_mass(const Field& u, double R) {
  const auto& g = u.grid();
  return detail::radial_moment(u, 2.0, [&](int j) { return g.r(j) < R ? 1.0 : 0.0; });
}

/// For dyadic T = t_end/2^k, the snapshot in [T/2, T] minimising the
/// localized potential on B(T^{1/(1+rho)}). Empty unless the run completed
/// and stored snapshots.
inline std::vector<VanishingPoint> vanishing_sequence(const Trajectory& traj, const PhysParams& prm, int levels = 4) {
  std::vector<VanishingPoint> out;
  if (traj.reason != StopReason::completed || traj.snapshots.empty()) return out;
  const double t_end = traj.snapshots.back().t;
  if (!(t_end > 0.0)) return out;
  for (int k = levels; k >= 0; --k) {
    const double T = t_end / std::pow(2.0, k);
    const double R = std::pow(T, 1.0 / (1.0 + prm.rho));
    std::optional<VanishingPoint> best;
    for (const auto& snap : traj.snapshots) {
      if (snap.t < 0.5 * T || snap.t > T * (1.0 + 1e-12)) continue;
      const double v = localized_potential(snap.field, R, prm);
      if (!best || v < best->localized) best = VanishingPoint{snap.t, R, v};
    }
    if (best) out.push_back(*best);
  }
  return out;
}

inline bool is_nonincreasing(const std::vector<VanishingPoint>& seq) {
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i].localized > seq[i - 1].localized) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Blow-up and scattering monitors

/// Q with the sign of the nonlinearity: G + kappa B/(p+1) P. Equals Q for the
/// focusing problem and is >= G in the defocusing one.
inline double signed_virial(const FunctionalRecord& r, const PhysParams& prm) {
  return r.grad_alpha_sq + prm.kappa * (prm.B() / (prm.p + 1.0)) * r.P;
}

struct BlowupOptions {
  double R = 4.0;  ///< radius at which the localized concavity driver is evaluated
};

/// Signature: the virial driver stays negative on every record and the run
/// stopped on the gradient cap.
inline MonitorReport blowup_monitor(const Trajectory& traj, const PhysParams& prm, const BlowupOptions& opt = {}) {
  MonitorReport rep;
  rep.monitor = "blowup";
  if (traj.records.empty()) {
    rep.summary = "empty trajectory";
    return rep;
  }
  double q_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : traj.records) q_max = std::max(q_max, signed_virial(r, prm));
  const bool cap = traj.reason == StopReason::gradient_cap_hit;
  const auto& last = traj.records.back();
  const double driver = signed_virial(last, prm) + std::pow(opt.R, -2.0) +
                        std::pow(opt.R, -prm.rho) * std::pow(last.grad_sq, prm.p - 1.0);
  rep.add("Q_max", q_max);
  rep.add("Q_final", signed_virial(last, prm));
  rep.add("gradient_cap_hit", cap ? 1.0 : 0.0);
  rep.add("t_stop", last.t);
  rep.add("max_grad", traj.max_grad);
  rep.add("R", opt.R);
  rep.add("concavity_driver_final", driver);
  if (prm.kappa > 0) rep.notes.emplace_back("defocusing: the virial driver is bounded below by ||grad_a u||^2");
  if (traj.reason == StopReason::nan_detected || traj.reason == StopReason::dt_floor_hit) {
    rep.summary = std::string("run ended by ") + to_string(traj.reason);
    return rep;
  }
  const bool negative = q_max < 0.0;
  rep.verdict = (negative && cap) ? Verdict::holds : Verdict::violated;
  rep.summary = rep.verdict == Verdict::holds ? "blow-up signature: Q < 0 throughout and gradient cap hit"
                                              : (negative ? "Q < 0 throughout but gradient stayed below cap"
                                                          : "no signature: Q reached nonnegative values");
  return rep;
}

struct ScatteringOptions {
  double R = 1.0;
  double epsilon = 0.5;
  double threshold_tol = 1e-6;  ///< initial |EM - 1| below this is treated as threshold data
};

/// Consistency check: sup PM < 1 together with small mass near the origin on
/// the tail [t_end/2, t_end] of the stored snapshots (the liminf proxy).
inline MonitorReport scattering_monitor(const Trajectory& traj, const ScatteringOptions& opt = {}) {
  MonitorReport rep;
  rep.monitor = "scattering";
  rep.add("R", opt.R);
  rep.add("epsilon", opt.epsilon);
  rep.notes.emplace_back("liminf approximated by the minimum over snapshots with t in [t_end/2, t_end]");
  if (traj.records.empty() || !traj.records.front().ratios) {
    rep.summary = "no ground-state ratios recorded";
    return rep;
  }
  if (traj.reason == StopReason::gradient_cap_hit) {
    rep.verdict = Verdict::violated;
    rep.summary = "not scattering-consistent: gradient cap hit";
    return rep;
  }
  if (traj.reason != StopReason::completed) {
    rep.summary = std::string("run ended by ") + to_string(traj.reason);
    return rep;
  }
  const auto& first = traj.records.front();
  double pm_sup = 0.0;
  for (const auto& r : traj.records) pm_sup = std::max(pm_sup, r.ratios->PM);
  rep.add("EM_initial", first.ratios->EM);
  rep.add("PM_sup", pm_sup);
  rep.add("P_final_over_initial", first.P > 0.0 ? traj.records.back().P / first.P : 0.0);
  if (std::abs(first.ratios->EM - 1.0) <= opt.threshold_tol) {
    rep.summary = "threshold data (EM = 1): no claim";
    return rep;
  }
  const bool pm_ok = pm_sup < 1.0;

  const double t_end = traj.records.back().t;
  std::optional<double> tail_min;
  for (const auto& snap : traj.snapshots) {
    if (snap.t < 0.5 * t_end) continue;
    const double lm = local_mass(snap.field, opt.R);
    tail_min = tail_min ? std::min(*tail_min, lm) : lm;
  }
  if (!tail_min) {
    rep.summary = "no snapshots on the tail window";
    return rep;
  }
  const bool leak_ok = *tail_min < opt.epsilon * opt.epsilon;
  rep.add("local_mass_tail_min", *tail_min);
  rep.verdict = (pm_ok && leak_ok) ? Verdict::holds : Verdict::violated;
  rep.summary = rep.verdict == Verdict::holds ? "scattering-consistent"
                                              : (pm_ok ? "local mass stays above epsilon^2" : "sup PM >= 1");
  return rep;
}

// ---------------------------------------------------------------------------
// Threshold classification

enum class Prediction { global_scattering, blowup, outside_theory };

inline const char* to_string(Prediction p) {
  switch (p) {
    case Prediction::global_scattering: return "global-scattering";
    case Prediction::blowup: return "blowup";
    case Prediction::outside_theory: return "outside-theory";
  }
  return "unknown";
}

struct Classification {
  InvariantRatios ratios;
  Prediction predicted;
};

/// EM < 1 with GM < 1 predicts scattering, EM < 1 with GM > 1 predicts blow-up;
/// anything within tol of the threshold equalities is outside the theory.
inline Classification classify(const InvariantRatios& q, double tol = 1e-9) {
  Prediction pred = Prediction::outside_theory;
  if (q.EM < 1.0 - tol) {
    if (q.GM < 1.0 - tol) pred = Prediction::global_scattering;
    else if (q.GM > 1.0 + tol) pred = Prediction::blowup;
  }
  return {q, pred};
}

inline Classification threshold_classifier(const Field& u0, const ReferenceFunctionals& ref, const PhysParams& prm,
                                           double tol = 1e-9) {
  return classify(invariant_ratios(u0, ref, prm), tol);
}

/// Ratios of c * phi(mu x) from the stored ground-state functionals alone:
/// in two dimensions M scales by c^2 mu^-2, both gradient norms by c^2 and P by
/// c^{p+1} mu^{rho-2}.
inline InvariantRatios scaled_ratios(double c, double mu, const ReferenceFunctionals& ref, const PhysParams& prm) {
  detail::require(mu > 0.0, "scaled ratios: mu must be positive");
  const double M = c * c * ref.mass / (mu * mu);
  const double G = c * c * ref.grad_alpha_sq;
  const double Gp = c * c * ref.grad_sq;
  const double P = std::pow(std::abs(c), prm.p + 1.0) * std::pow(mu, prm.rho - 2.0) * ref.potential;
  return ratios_from(M, energy_from(G, P, prm), Gp, P, ref, prm);
}

}  // namespace abnls
