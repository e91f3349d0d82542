#pragma once
// Time integration of
//
//   i u_t = K_alpha u + kappa |x|^{-rho} |u|^{p-1} u
//
// by Strang splitting. The nonlinear sub-flow keeps |u| fixed pointwise and
// is therefore solved exactly as a phase rotation; the linear sub-flow
// e^{-i dt K_alpha} is approximated per angular mode by Crank-Nicolson, which
// is unitary in the weighted inner product because the mode stencil is
// self-adjoint there.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "abnls/error.hpp"
#include "abnls/functionals.hpp"
#include "abnls/grid.hpp"
#include "abnls/magop.hpp"
#include "abnls/params.hpp"
#include "abnls/tridiag.hpp"

namespace abnls {

/// u <- u exp(-i kappa dt |x|^{-rho} |u|^{p-1}), pointwise.
inline Field nonlinear_phase(Field u, double dt, const PhysParams& prm) {
  if (dt == 0.0) return u;
  const auto& g = u.grid();
  const int nt = g.n_theta();
  for (int j = 0; j < g.n_r(); ++j) {
    const double coupling = -prm.kappa * dt * std::pow(g.r(j), -prm.rho);
    for (int k = 0; k < nt; ++k) {
      cplx& z = u(j, k);
      const double a = std::abs(z);
      const double phase = coupling * std::pow(a, prm.p - 1.0);
      z *= cplx(std::cos(phase), std::sin(phase));
    }
  }
  return u;
}

/// Crank-Nicolson propagator for all modes at one time step, factored once.
class LinearPropagator {
 public:
  LinearPropagator(const PhysParams& prm, const PolarGrid& grid, double dt) : grid_(grid), dt_(dt) {
    const double half = 0.5 * dt;
    for (int m = -grid.max_mode(); m <= grid.max_mode(); ++m) {
      const auto L = mode_stencil(mode_order(m, prm.alpha), grid);
      Tridiagonal<cplx> implicit(L.size()), explicit_(L.size());
      const cplx ih(0.0, half);
      for (std::size_t j = 0; j < L.size(); ++j) {
        implicit.lower[j] = ih * L.lower[j];
        implicit.diag[j] = 1.0 + ih * L.diag[j];
        implicit.upper[j] = ih * L.upper[j];
        explicit_.lower[j] = -ih * L.lower[j];
        explicit_.diag[j] = 1.0 - ih * L.diag[j];
        explicit_.upper[j] = -ih * L.upper[j];
      }
      rhs_.push_back(std::move(explicit_));
      lhs_.emplace_back(implicit);
    }
  }

  double dt() const { return dt_; }
  const PolarGrid& grid() const { return grid_; }

  ModeStack apply(const ModeStack& s) const {
    detail::require(s.grid() == grid_, "linear step: grid mismatch");
    ModeStack out(grid_);
    const int M = grid_.max_mode();
    for (int m = -M; m <= M; ++m) {
      const auto b = rhs_[m + M].apply(std::span<const cplx>(s.mode(m)));
      out.mode(m) = lhs_[m + M].solve(std::span<const cplx>(b));
    }
    return out;
  }

 private:
  PolarGrid grid_;
  double dt_;
  std::vector<Tridiagonal<cplx>> rhs_;
  std::vector<ThomasFactor<cplx>> lhs_;
};

/// One Crank-Nicolson step of the linear flow, mode by mode.
inline ModeStack linear_step(const ModeStack& s, double dt, const PhysParams& prm) {
  return LinearPropagator(prm, s.grid(), dt).apply(s);
}

/// Strang splitting with a cached linear propagator.
class SplitStepper {
 public:
  SplitStepper(PhysParams prm, PolarGrid grid) : prm_(prm), grid_(std::move(grid)) {}

  Field step(const Field& u, double dt) {
    if (!prop_ || prop_->dt() != dt) prop_.emplace(prm_, grid_, dt);
    auto half = nonlinear_phase(u, 0.5 * dt, prm_);
    auto lin = synthesize(prop_->apply(analyze(half)));
    return nonlinear_phase(std::move(lin), 0.5 * dt, prm_);
  }

 private:
  PhysParams prm_;
  PolarGrid grid_;
  std::optional<LinearPropagator> prop_;
};

inline Field strang_step(const Field& u, double dt, const PhysParams& prm) {
  return SplitStepper(prm, u.grid()).step(u, dt);
}

enum class StopReason { completed, gradient_cap_hit, dt_floor_hit, nan_detected };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::gradient_cap_hit: return "gradient_cap_hit";
    case StopReason::dt_floor_hit: return "dt_floor_hit";
    case StopReason::nan_detected: return "nan_detected";
  }
  return "unknown";
}

/// Called on every recorded state.
using Monitor = std::function<void(const FunctionalRecord&, const Field&)>;

struct EvolveConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool adapt = false;
  double dt_floor = 1e-8;
  /// Stop once ||grad u|| (plain gradient) exceeds this value.
  double gradient_cap = std::numeric_limits<double>::infinity();
  int record_every = 10;    ///< steps between records; the final state is always recorded
  int snapshot_every = 0;   ///< records between stored field snapshots; 0 disables
  std::vector<Monitor> monitors;
};

struct Snapshot {
  double t;
  Field field;
};

struct Trajectory {
  std::vector<FunctionalRecord> records;
  StopReason reason = StopReason::completed;
  std::vector<Snapshot> snapshots;
  Field final_state;
  long steps = 0;
  double final_dt = 0.0;
  double max_grad = 0.0;   ///< largest ||grad u|| seen at any step that was checked
};

/// Evolve u0 until t_end or a stop trigger. Failures of the integration are
/// reported through Trajectory::reason, never thrown.
inline Trajectory run(const Field& u0, const EvolveConfig& cfg, const PhysParams& prm,
                      const ReferenceFunctionals* ref = nullptr) {
  prm.validate();
  detail::require(cfg.dt > 0.0, "evolve: dt must be positive");
  detail::require(cfg.t_end >= 0.0, "evolve: t_end must be nonnegative");
  detail::require(cfg.record_every >= 1, "evolve: record_every must be >= 1");
  detail::require(cfg.dt_floor < cfg.dt, "evolve: dt_floor must be below dt");
  detail::require(u0.finite(), "evolve: initial field is not finite");

  const auto& grid = u0.grid();
  Trajectory traj;
  auto record = [&](const Field& u, double t) {
    auto rec = evaluate(u, t, prm, ref);
    for (const auto& mon : cfg.monitors) mon(rec, u);
    traj.records.push_back(rec);
    if (cfg.snapshot_every > 0 && (traj.records.size() - 1) % cfg.snapshot_every == 0)
      traj.snapshots.push_back({t, u});
    return rec;
  };

  const auto first = record(u0, 0.0);
  const double g0 = first.grad_sq;
  const bool watch_gradient = cfg.adapt || std::isfinite(cfg.gradient_cap);
  traj.max_grad = std::sqrt(g0);
  if (std::isfinite(cfg.gradient_cap))
    detail::require(cfg.gradient_cap > std::sqrt(g0), "evolve: gradient_cap must exceed the initial ||grad u||");

  SplitStepper stepper(prm, grid);
  Field u = u0;
  double t = 0.0;
  double dt = cfg.dt;
  double current_g = g0;
  long since_record = 0;
  bool recorded_last = true;
  const double t_tol = 1e-12 * std::max(1.0, cfg.t_end);

  while (cfg.t_end - t > t_tol) {
    if (cfg.adapt && current_g > 0.0) {
      dt = cfg.dt * std::min(1.0, g0 / current_g);
      if (dt < cfg.dt_floor) {
        traj.reason = StopReason::dt_floor_hit;
        break;
      }
    }
    double step = dt;
    const double remaining = cfg.t_end - t;
    if (step >= remaining - t_tol) step = remaining;
    u = stepper.step(u, step);
    ++traj.steps;
    // Fixed-step runs land on multiples of dt exactly; otherwise accumulate.
    t = (!cfg.adapt && step == cfg.dt) ? traj.steps * cfg.dt : t + step;
    if (step == remaining) t = cfg.t_end;
    traj.final_dt = step;
    recorded_last = false;

    if (!u.finite()) {
      traj.reason = StopReason::nan_detected;
      break;
    }
    if (watch_gradient) {
      current_g = grad_sq(analyze(u));
      traj.max_grad = std::max(traj.max_grad, std::sqrt(current_g));
      if (std::sqrt(current_g) > cfg.gradient_cap) {
        traj.reason = StopReason::gradient_cap_hit;
        break;
      }
    }
    if (++since_record >= cfg.record_every) {
      record(u, t);
      since_record = 0;
      recorded_last = true;
    }
  }
  if (!recorded_last && u.finite()) record(u, t);
  traj.final_state = std::move(u);
  return traj;
}

/// max_{j,k} |u(r_j, theta_k)|
inline double sup_norm(const Field& u) {
  double m = 0.0;
  for (const auto& z : u.values()) m = std::max(m, std::abs(z));
  return m;
}

/// Discrete L^2 distance ||a - b||_w.
inline double l2_distance(const Field& a, const Field& b) { return std::sqrt(mass(a - b)); }

/// Observed order of the splitting from runs at dt and dt/2 compared with a
/// dt/4 reference. With e(h) = C h^q the ratio of the two differences is
/// 2^q + 1, hence q = log2(ratio - 1).
struct OrderEstimate {
  double err_coarse;
  double err_fine;
  double order;
};

inline OrderEstimate strang_order(const Field& u0, double dt, double t_end, const PhysParams& prm) {
  auto integrate_to = [&](double h) {
    SplitStepper st(prm, u0.grid());
    Field u = u0;
    const long n = std::lround(t_end / h);
    for (long i = 0; i < n; ++i) u = st.step(u, h);
    return u;
  };
  const Field ref = integrate_to(dt / 4.0);
  const double e1 = l2_distance(integrate_to(dt), ref);
  const double e2 = l2_distance(integrate_to(dt / 2.0), ref);
  return {e1, e2, std::log2(e1 / e2 - 1.0)};
}

/// Radial Gaussian r^nu e^{-r^2/(2 w^2)} with nu the order of mode 0 so that it
/// lies in the form domain for every flux.
inline Field gaussian_initial(const PolarGrid& grid, const PhysParams& prm, double amplitude = 1.0,
                              double width = 1.0) {
  const double nu = mode_order(0, prm.alpha);
  return Field::from_function(grid, [&](double r, double) {
    return amplitude * std::pow(r, nu) * std::exp(-r * r / (2.0 * width * width));
  });
}

}  // namespace abnls
