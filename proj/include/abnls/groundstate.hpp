#pragma once
// Ground state of  L phi + phi = |x|^{-rho} phi^p  in the radial sector, found
// by minimising the Weinstein quotient
//
//   J(u) = M[u]^{A/2} ||u||_{H^1_alpha}^{B} / P[u]
//
// and then fixing amplitude and scale with the two Pohozaev identities.
//
// J is invariant under u -> c u(mu x), so a descent on a fixed grid is free to
// drift along the dilation orbit until the profile reaches grid scale. The
// iteration therefore stays on the slice {M = 1, G/M = B/A}, which is exactly
// the gauge in which the final rescale needs no dilation. Steps are
// preconditioned by (L + I)^{-1} and projected so that they are tangent to
// the slice, then pulled back with a short Newton retraction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "abnls/error.hpp"
#include "abnls/functionals.hpp"
#include "abnls/grid.hpp"
#include "abnls/magop.hpp"
#include "abnls/params.hpp"
#include "abnls/tridiag.hpp"

namespace abnls {

enum class SeedKind { gaussian, plateau };

inline SeedKind parse_seed_kind(const std::string& s) {
  if (s == "gaussian") return SeedKind::gaussian;
  if (s == "plateau") return SeedKind::plateau;
  throw ConfigError("unknown seed kind '" + s + "' (expected gaussian or plateau)");
}

inline const char* to_string(SeedKind k) { return k == SeedKind::gaussian ? "gaussian" : "plateau"; }

/// Positive radial seed with the indicial behaviour r^nu at the origin.
inline std::vector<double> seed_profile(SeedKind kind, double nu, const PolarGrid& grid) {
  std::vector<double> s(grid.n_r());
  for (int j = 0; j < grid.n_r(); ++j) {
    const double r = grid.r(j);
    const double envelope = kind == SeedKind::gaussian ? std::exp(-r * r / 2.0) : std::exp(-std::pow(r / 2.0, 4));
    s[j] = std::pow(r, nu) * envelope;
  }
  return s;
}

struct MinimizeOptions {
  double tol = 1e-10;     ///< stop when the relative decrease of log J per step falls below this
  int max_iters = 5000;
  bool validation_mode = false;  ///< admit integer flux and rho = 0 (classical cross-checks)
};

struct WeinsteinMinimizer {
  PolarGrid grid;
  std::vector<double> profile;      ///< normalised so that M = 1 and G = B/A
  double weinstein_value = 0.0;     ///< J at the minimiser
  int iterations = 0;
  std::vector<double> history;      ///< J after every accepted step, starting with the seed
};

namespace detail {

/// Radial (m = 0) problem data shared by the minimiser and the rescale.
class RadialProblem {
 public:
  RadialProblem(const PhysParams& prm, const PolarGrid& grid)
      : prm_(prm), grid_(grid), op_(0, prm.alpha, grid), shifted_(op_.stencil()) {
    for (auto& d : shifted_.diag) d += 1.0;
    precond_ = ThomasFactor<double>(shifted_);
    weight_.resize(grid.n_r());
    for (int j = 0; j < grid.n_r(); ++j) weight_[j] = std::pow(grid.r(j), -prm.rho);
  }

  double ip(const std::vector<double>& a, const std::vector<double>& b) const {
    return weighted_inner<double>(a, b, grid_);
  }
  std::vector<double> L(const std::vector<double>& g) const { return op_.apply(g); }
  std::vector<double> K(const std::vector<double>& g) const { return precond_.solve(std::span<const double>(g)); }

  double M(const std::vector<double>& u) const { return ip(u, u); }
  double G(const std::vector<double>& u) const {
    return ModeOperator::face_form(op_.order(), std::span<const double>(u), grid_);
  }
  double P(const std::vector<double>& u) const {
    double acc = 0.0;
    for (int j = 0; j < grid_.n_r(); ++j) acc += grid_.w(j) * weight_[j] * std::pow(std::abs(u[j]), prm_.p + 1.0);
    return acc;
  }
  double log_J(const std::vector<double>& u) const {
    return prm_.A() / 2.0 * std::log(M(u)) + prm_.B() / 2.0 * std::log(G(u)) - std::log(P(u));
  }
  /// r^{-rho} |u|^{p-1} u
  std::vector<double> nonlinearity(const std::vector<double>& u) const {
    std::vector<double> out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = weight_[j] * std::pow(std::abs(u[j]), prm_.p - 1.0) * u[j];
    return out;
  }

  /// Pull u back onto {M = 1, G/M = B/A}.
  std::vector<double> retract(std::vector<double> u) const {
    const double target = prm_.B() / prm_.A();
    normalize(u);
    for (int k = 0; k < 20; ++k) {
      const double m = M(u);
      const double g = G(u);
      const double q = g / m - target;
      if (std::abs(q) < 1e-14 * target) break;
      const auto lu = L(u);
      std::vector<double> e(u.size());
      for (std::size_t j = 0; j < u.size(); ++j) e[j] = lu[j] - g / m * u[j];
      e = K(e);
      const double dq = 2.0 * ip(lu, e) / m - 2.0 * g * ip(u, e) / (m * m);
      if (dq == 0.0) break;
      for (std::size_t j = 0; j < u.size(); ++j) u[j] -= q / dq * e[j];
      normalize(u);
    }
    return u;
  }

  const ModeOperator& op() const { return op_; }

 private:
  void normalize(std::vector<double>& u) const {
    const double s = 1.0 / std::sqrt(M(u));
    for (auto& v : u) v *= s;
  }

  PhysParams prm_;
  PolarGrid grid_;
  ModeOperator op_;
  Tridiagonal<double> shifted_;
  ThomasFactor<double> precond_;
  std::vector<double> weight_;
};

inline void check_ground_state_params(const PhysParams& prm, bool validation_mode) {
  prm.validate();
  if (validation_mode) return;
  if (prm.flux_distance() == 0.0)
    throw ConfigError("ground state: integer flux is only admitted in validation mode");
  if (!(prm.rho > 0.0)) throw ConfigError("ground state: rho must be positive outside validation mode");
}

}  // namespace detail

inline WeinsteinMinimizer minimize_weinstein(const PhysParams& prm, const PolarGrid& grid,
                                             std::vector<double> seed, const MinimizeOptions& opt = {}) {
  detail::check_ground_state_params(prm, opt.validation_mode);
  detail::require(seed.size() == static_cast<std::size_t>(grid.n_r()), "ground state: seed length mismatch");
  for (double v : seed)
    detail::require(std::isfinite(v) && v >= 0.0, "ground state: seed must be finite and nonnegative");
  detail::require(std::any_of(seed.begin(), seed.end(), [](double v) { return v > 0.0; }),
                  "ground state: seed must not vanish identically");

  const detail::RadialProblem pb(prm, grid);
  const double A = prm.A();
  const double B = prm.B();
  const double p1 = prm.p + 1.0;
  const std::size_t n = seed.size();

  auto psi = pb.retract(std::move(seed));
  double logJ = pb.log_J(psi);
  WeinsteinMinimizer out;
  out.grid = grid;
  out.history.push_back(std::exp(logJ));

  double tau = 1.0;
  bool converged = false;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    const double m = pb.M(psi);
    const double g = pb.G(psi);
    const double P = pb.P(psi);
    if (!(P > 0.0)) throw NumericalError("ground state: iterate collapsed to the zero field");
    const auto lpsi = pb.L(psi);
    const auto nl = pb.nonlinearity(psi);
    std::vector<double> grad(n);
    for (std::size_t j = 0; j < n; ++j) grad[j] = (A / m) * psi[j] + (B / g) * lpsi[j] - (p1 / P) * nl[j];

    // Remove the components that would leave the constraint slice, in the
    // metric induced by the preconditioner.
    const auto kg = pb.K(grad);
    const auto k0 = pb.K(psi);
    const auto k1 = pb.K(lpsi);
    const double a00 = pb.ip(psi, k0), a01 = pb.ip(psi, k1);
    const double a10 = pb.ip(lpsi, k0), a11 = pb.ip(lpsi, k1);
    const double b0 = pb.ip(psi, kg), b1 = pb.ip(lpsi, kg);
    const double det = a00 * a11 - a01 * a10;
    const double beta0 = (b0 * a11 - a01 * b1) / det;
    const double beta1 = (a00 * b1 - a10 * b0) / det;
    std::vector<double> dir(n);
    for (std::size_t j = 0; j < n; ++j) dir[j] = kg[j] - beta0 * k0[j] - beta1 * k1[j];

    std::vector<double> trial(n);
    double logJ_trial = logJ;
    std::vector<double> candidate;
    while (true) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = psi[j] - tau * dir[j];
      candidate = pb.retract(trial);
      logJ_trial = pb.log_J(candidate);
      if (logJ_trial <= logJ) break;
      tau *= 0.5;
      if (tau < 1e-14) break;
    }
    if (!(logJ_trial <= logJ)) {
      // No descent possible at working precision: the iterate is stationary.
      converged = true;
      break;
    }
    const double decrease = logJ - logJ_trial;
    psi = std::move(candidate);
    logJ = logJ_trial;
    out.history.push_back(std::exp(logJ));
    tau = std::min(2.0 * tau, 10.0);
    if (decrease < opt.tol * std::abs(logJ)) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged) throw NumericalError("ground state: Weinstein descent did not converge in max_iters");
  for (double v : psi)
    if (!std::isfinite(v)) throw NumericalError("ground state: non-finite iterate");
  // The minimiser of a functional that depends on |u| can be taken positive.
  for (auto& v : psi) v = std::abs(v);
  out.profile = std::move(psi);
  out.weinstein_value = std::exp(logJ);
  out.iterations = it;
  return out;
}

struct GroundState {
  PhysParams params;
  PolarGrid grid;                 ///< radial grid carrying the profile (n_modes = 1)
  std::vector<double> profile;    ///< phi(r_j) > 0
  ReferenceFunctionals ref;       ///< cached M, G, P, E, K_opt
  double weinstein_value = 0.0;   ///< J(phi)
  double amplitude = 1.0;         ///< lambda of the last rescale
  double dilation = 1.0;          ///< mu of the last rescale
  int iterations = 0;

  double mass() const { return ref.mass; }
  double grad_alpha_sq() const { return ref.grad_alpha_sq; }
  double potential() const { return ref.potential; }
  double k_opt() const { return ref.k_opt; }

  /// phi as a field on the ground-state radial grid with the requested angular resolution.
  Field field(int n_modes = 1, double amplitude_factor = 1.0) const {
    const PolarGrid g = with_modes(grid, n_modes);
    std::vector<double> scaled(profile);
    for (auto& v : scaled) v *= amplitude_factor;
    return Field::radial(g, scaled);
  }
};

/// (p+1)/A (A/B)^{B/2} M[phi]^{-(p-1)/2}.
inline double sharp_constant_from_mass(double M, const PhysParams& prm) {
  const double A = prm.A(), B = prm.B();
  return (prm.p + 1.0) / A * std::pow(A / B, B / 2.0) * std::pow(M, -(prm.p - 1.0) / 2.0);
}

inline double sharp_constant(const GroundState& gs) { return sharp_constant_from_mass(gs.ref.mass, gs.params); }

/// Maps psi to phi with psi(x) = lambda phi(mu x), choosing (lambda, mu) so
/// that both Pohozaev identities hold. The dilation is carried by the grid.
inline GroundState rescale_to_ground_state(const std::vector<double>& psi, const PolarGrid& grid,
                                           const PhysParams& prm) {
  detail::require(psi.size() == static_cast<std::size_t>(grid.n_r()), "rescale: profile length mismatch");
  const detail::RadialProblem pb(prm, grid);
  const double M = pb.M(psi), G = pb.G(psi), P = pb.P(psi);
  if (!(P > 0.0)) throw NumericalError("rescale: degenerate minimiser with P = 0");
  const double A = prm.A(), B = prm.B(), p1 = prm.p + 1.0;
  const double mu = std::sqrt((B / A) * M / G);
  const double lambda = std::pow(p1 * G * std::pow(mu, 2.0 - prm.rho) / (B * P), 1.0 / (prm.p - 1.0));

  GroundState gs;
  gs.params = prm;
  gs.grid = PolarGrid(grid.n_r(), grid.r_max() / mu, 1);
  gs.profile.resize(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) gs.profile[j] = lambda * std::abs(psi[j]);
  gs.amplitude = lambda;
  gs.dilation = mu;

  const detail::RadialProblem on_gs(prm, gs.grid);
  gs.ref.params = prm;
  gs.ref.mass = on_gs.M(gs.profile);
  gs.ref.grad_alpha_sq = on_gs.G(gs.profile);
  gs.ref.grad_sq = ModeOperator::face_form(0.0, std::span<const double>(gs.profile), gs.grid);
  gs.ref.potential = on_gs.P(gs.profile);
  gs.ref.energy = gs.ref.grad_alpha_sq - 2.0 / p1 * gs.ref.potential;
  gs.ref.k_opt = sharp_constant_from_mass(gs.ref.mass, prm);
  gs.weinstein_value = weinstein_from(gs.ref.mass, gs.ref.grad_alpha_sq, gs.ref.potential, prm);
  return gs;
}

inline GroundState rescale_to_ground_state(const WeinsteinMinimizer& w, const PhysParams& prm) {
  auto gs = rescale_to_ground_state(w.profile, w.grid, prm);
  gs.iterations = w.iterations;
  return gs;
}

struct PohozaevResiduals {
  double mass_identity;      ///< |P - (p+1)/A M| / P
  double gradient_identity;  ///< |P - (p+1)/B G| / P
};

inline PohozaevResiduals pohozaev_residuals(double M, double G, double P, const PhysParams& prm) {
  const double p1 = prm.p + 1.0;
  return {std::abs(P - p1 / prm.A() * M) / P, std::abs(P - p1 / prm.B() * G) / P};
}

inline PohozaevResiduals pohozaev_residuals(const GroundState& gs) {
  return pohozaev_residuals(gs.ref.mass, gs.ref.grad_alpha_sq, gs.ref.potential, gs.params);
}

/// ||L phi + phi - |x|^{-rho} phi^p||_w / ||phi||_w on the ground-state grid.
inline double euler_lagrange_residual(const GroundState& gs) {
  const detail::RadialProblem pb(gs.params, gs.grid);
  const auto lphi = pb.L(gs.profile);
  const auto nl = pb.nonlinearity(gs.profile);
  std::vector<double> res(gs.profile.size());
  for (std::size_t j = 0; j < res.size(); ++j) res[j] = lphi[j] + gs.profile[j] - nl[j];
  return std::sqrt(pb.ip(res, res) / pb.ip(gs.profile, gs.profile));
}

/// Slopes d log phi / d log r between consecutive inner nodes.
inline std::vector<double> near_origin_slopes(const GroundState& gs, int count = 2) {
  std::vector<double> out;
  for (int j = 0; j < count && j + 1 < gs.grid.n_r(); ++j)
    out.push_back((std::log(gs.profile[j + 1]) - std::log(gs.profile[j])) /
                  (std::log(gs.grid.r(j + 1)) - std::log(gs.grid.r(j))));
  return out;
}

/// Positive everywhere and nonincreasing beyond the maximum.
inline bool profile_shape_ok(const GroundState& gs) {
  const auto& f = gs.profile;
  if (std::any_of(f.begin(), f.end(), [](double v) { return !(v > 0.0); })) return false;
  const auto peak = std::max_element(f.begin(), f.end());
  return std::is_sorted(peak, f.end(), std::greater<>());
}

/// Complete pipeline: seed, minimise, rescale.
inline GroundState compute_ground_state(const PhysParams& prm, const PolarGrid& grid, SeedKind seed = SeedKind::gaussian,
                                        const MinimizeOptions& opt = {}) {
  const PolarGrid radial(grid.n_r(), grid.r_max(), 1);
  const double nu = mode_order(0, prm.alpha);
  auto w = minimize_weinstein(prm, radial, seed_profile(seed, nu, radial), opt);
  return rescale_to_ground_state(w, prm);
}

struct SymmetryProbe {
  double radial_value;      ///< J(phi)
  double min_probe_value;   ///< smallest J over the symmetry-broken perturbations
  int probes;
  bool radial_is_lowest() const { return min_probe_value >= radial_value * (1.0 - 1e-12); }
};

/// Evaluate J on phi plus small seeded perturbations living in modes m != 0.
inline SymmetryProbe symmetry_probe(const GroundState& gs, int n_modes = 5, int probes = 8, double eps = 1e-2,
                                    unsigned seed = 7) {
  detail::require(n_modes >= 3, "symmetry probe: needs at least three angular modes");
  const PhysParams& prm = gs.params;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const PolarGrid grid = with_modes(gs.grid, n_modes);
  SymmetryProbe out{gs.weinstein_value, std::numeric_limits<double>::infinity(), probes};
  const double scale = *std::max_element(gs.profile.begin(), gs.profile.end());
  for (int k = 0; k < probes; ++k) {
    ModeStack s(grid);
    for (int j = 0; j < grid.n_r(); ++j) s.mode(0)[j] = gs.profile[j];
    for (int m = -grid.max_mode(); m <= grid.max_mode(); ++m) {
      if (m == 0) continue;
      const double nu = mode_order(m, prm.alpha);
      const cplx c(nd(rng), nd(rng));
      for (int j = 0; j < grid.n_r(); ++j) {
        const double r = grid.r(j);
        s.mode(m)[j] += eps * scale * c * std::pow(r, nu) * std::exp(-r * r / 2.0);
      }
    }
    const Field u = synthesize(s);
    const double J = weinstein_from(mass(u), grad_alpha_sq(u, prm), potential(u, prm), prm);
    out.min_probe_value = std::min(out.min_probe_value, J);
  }
  return out;
}

}  // namespace abnls
