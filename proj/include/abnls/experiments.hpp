#pragma once
// Subcommand drivers behind the abnls tool. Each returns a process exit code
// and writes its files below the configured output directory.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "abnls/config.hpp"
#include "abnls/diagnostics.hpp"
#include "abnls/error.hpp"
#include "abnls/evolve.hpp"
#include "abnls/functionals.hpp"
#include "abnls/groundstate.hpp"
#include "abnls/io.hpp"
#include "abnls/magop.hpp"

namespace abnls {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_gate = 3, exit_io = 4 };

/// Acceptance gates of the ground-state pipeline.
struct GroundStateGates {
  double pohozaev = 1e-5;
  double sharp_constant = 1e-4;  ///< |K_opt J(phi) - 1|
  double euler_lagrange = 1e-4;
};

namespace detail {

inline std::filesystem::path out_path(const ExperimentConfig& c, const std::string& name) {
  return std::filesystem::path(c.output.directory) / name;
}

inline PolarGrid config_grid(const ExperimentConfig& c) { return make_grid(c.grid.n_r, c.grid.r_max, c.grid.n_modes); }

inline GroundState ground_state_for(const ExperimentConfig& c, bool validation_mode) {
  c.params.lambda_c();  // rejects the mass-critical exponent up front
  MinimizeOptions opt;
  opt.tol = c.groundstate.tol;
  opt.max_iters = c.groundstate.max_iters;
  opt.validation_mode = validation_mode;
  return compute_ground_state(c.params, config_grid(c), c.groundstate.seed, opt);
}

inline Json ground_state_json(const GroundState& gs) {
  const auto poh = pohozaev_residuals(gs);
  Json slopes = Json::array();
  for (double s : near_origin_slopes(gs)) slopes.push_back(json_real(s));
  return Json{{"params", to_json(gs.params)},
              {"grid", {{"n_r", gs.grid.n_r()}, {"r_max", gs.grid.r_max()}}},
              {"mass", gs.mass()},
              {"grad_alpha_sq", gs.grad_alpha_sq()},
              {"grad_sq", gs.ref.grad_sq},
              {"potential", gs.potential()},
              {"energy", gs.ref.energy},
              {"k_opt", gs.k_opt()},
              {"weinstein_value", gs.weinstein_value},
              {"sharp_constant_defect", gs.k_opt() * gs.weinstein_value - 1.0},
              {"pohozaev_mass_residual", poh.mass_identity},
              {"pohozaev_gradient_residual", poh.gradient_identity},
              {"euler_lagrange_residual", euler_lagrange_residual(gs)},
              {"rescale_lambda", gs.amplitude},
              {"rescale_mu", gs.dilation},
              {"iterations", gs.iterations},
              {"near_origin_slopes", slopes},
              {"expected_origin_slope", mode_order(0, gs.params.alpha)},
              {"profile_shape_ok", profile_shape_ok(gs)}};
}

/// Smooth pseudo-random field: per mode a complex amplitude times r^nu and a
/// Gaussian envelope at a random centre and width.
inline Field random_smooth_field(const PolarGrid& g, const PhysParams& prm, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> width(0.6, 3.0), centre(0.0, 3.0);
  ModeStack s(g);
  for (int m = -g.max_mode(); m <= g.max_mode(); ++m) {
    const double nu = mode_order(m, prm.alpha);
    const cplx a(nd(rng), nd(rng));
    const double w = width(rng), c = centre(rng);
    const double damp = 1.0 / (1.0 + m * m);
    for (int j = 0; j < g.n_r(); ++j) {
      const double r = g.r(j);
      s.mode(m)[j] = damp * a * std::pow(r, nu) * std::exp(-(r - c) * (r - c) / (w * w));
    }
  }
  return synthesize(s);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_groundstate(const ExperimentConfig& c, std::ostream& log, const GroundStateGates& gates = {}) {
  const GroundState gs = detail::ground_state_for(c, c.groundstate.validation_mode);
  CsvWriter profile({"r", "phi"});
  for (int j = 0; j < gs.grid.n_r(); ++j) profile.row({fmt_real(gs.grid.r(j)), fmt_real(gs.profile[j])});
  Json report = detail::ground_state_json(gs);
  const auto poh = pohozaev_residuals(gs);
  const double el = euler_lagrange_residual(gs);
  const double kj = std::abs(gs.k_opt() * gs.weinstein_value - 1.0);
  const bool pass = poh.mass_identity <= gates.pohozaev && poh.gradient_identity <= gates.pohozaev &&
                    el <= gates.euler_lagrange && kj <= gates.sharp_constant;
  report["gate"] = {{"pohozaev", gates.pohozaev},
                    {"sharp_constant", gates.sharp_constant},
                    {"euler_lagrange", gates.euler_lagrange},
                    {"passed", pass}};
  write_text(detail::out_path(c, "profile.csv"), profile.text());
  write_json(detail::out_path(c, "groundstate.json"), report);
  write_json(detail::out_path(c, "manifest.json"),
             manifest("groundstate", c, {{"profile.csv", profile.header()}, {"groundstate.json", "json"}}));
  log << fmt::format("ground state: M={:.10g} G={:.10g} P={:.10g} K_opt={:.10g}\n", gs.mass(), gs.grad_alpha_sq(),
                     gs.potential(), gs.k_opt());
  log << fmt::format("residuals: pohozaev {:.3e} {:.3e}, euler-lagrange {:.3e}, |K_opt J - 1| {:.3e}: {}\n",
                     poh.mass_identity, poh.gradient_identity, el, kj, pass ? "PASS" : "FAIL");
  return pass ? exit_ok : exit_gate;
}

// ---------------------------------------------------------------------------

/// Parsed form of an initial-data spec: "gaussian [amplitude [width]]",
/// "scaled_ground_state c" or "file PATH".
struct InitialSpec {
  enum class Kind { gaussian, scaled_ground_state, file } kind = Kind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  std::string path;
};

inline InitialSpec parse_initial_spec(const std::string& text, const InitialSettings& defaults = {}) {
  std::istringstream in(text);
  std::string head;
  in >> head;
  InitialSpec s;
  s.amplitude = defaults.gaussian_amplitude;
  s.width = defaults.gaussian_width;
  auto number = [&](double& target, bool required) {
    std::string tok;
    if (!(in >> tok)) {
      if (required) throw ConfigError("initial spec '" + text + "': missing number");
      return;
    }
    try {
      std::size_t used = 0;
      target = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("initial spec '" + text + "': cannot parse '" + tok + "'");
    }
  };
  if (head == "gaussian") {
    number(s.amplitude, false);
    number(s.width, false);
    detail::require(s.width > 0.0, "initial spec: gaussian width must be positive");
  } else if (head == "scaled_ground_state") {
    s.kind = InitialSpec::Kind::scaled_ground_state;
    number(s.amplitude, true);
  } else if (head == "file") {
    s.kind = InitialSpec::Kind::file;
    std::getline(in >> std::ws, s.path);
    detail::require(!s.path.empty(), "initial spec: file needs a path");
  } else {
    throw ConfigError("initial spec '" + text + "': expected gaussian, scaled_ground_state or file");
  }
  std::string rest;
  if (s.kind != InitialSpec::Kind::file && (in >> rest)) throw ConfigError("initial spec '" + text + "': trailing input");
  return s;
}

inline EvolveConfig evolve_config_for(const ExperimentConfig& c, const Field& u0) {
  EvolveConfig cfg;
  cfg.dt = c.evolve.dt;
  cfg.t_end = c.evolve.t_end;
  cfg.adapt = c.evolve.adapt;
  cfg.dt_floor = c.evolve.dt_floor;
  cfg.record_every = c.evolve.record_every;
  cfg.snapshot_every = c.evolve.snapshot_every;
  const double g0 = std::sqrt(grad_sq(u0));
  cfg.gradient_cap = g0 > 0.0 ? c.evolve.gradient_cap_factor * g0 : std::numeric_limits<double>::infinity();
  return cfg;
}

/// Monitor reports of one trajectory, in a fixed order.
inline std::vector<MonitorReport> monitor_reports(const Trajectory& tr, const ExperimentConfig& c, bool with_reference) {
  std::vector<MonitorReport> out;
  out.push_back(blowup_monitor(tr, c.params, BlowupOptions{c.diagnostics.blowup_R}));
  if (with_reference) {
    ScatteringOptions so;
    so.R = c.diagnostics.scatter_R;
    so.epsilon = c.diagnostics.epsilon;
    out.push_back(scattering_monitor(tr, so));
  }
  MorawetzOptions mo;
  mo.levels = c.diagnostics.morawetz_levels;
  out.push_back(morawetz_growth(tr, c.params, mo));
  return out;
}

inline int cmd_evolve(const ExperimentConfig& c, const std::string& initial, std::ostream& log) {
  const auto spec = parse_initial_spec(initial, c.initial);
  const PolarGrid grid = detail::config_grid(c);
  std::optional<GroundState> gs;
  const bool focusing = c.params.kappa < 0;
  if (spec.kind == InitialSpec::Kind::scaled_ground_state || focusing) gs = detail::ground_state_for(c, c.groundstate.validation_mode);

  Field u0;
  switch (spec.kind) {
    case InitialSpec::Kind::gaussian: u0 = gaussian_initial(grid, c.params, spec.amplitude, spec.width); break;
    case InitialSpec::Kind::scaled_ground_state: u0 = gs->field(c.grid.n_modes, spec.amplitude); break;
    case InitialSpec::Kind::file: u0 = read_radial_field(spec.path, grid); break;
  }
  const ReferenceFunctionals* ref = gs ? &gs->ref : nullptr;
  const auto traj = run(u0, evolve_config_for(c, u0), c.params, ref);
  const auto reports = monitor_reports(traj, c, ref != nullptr);

  Json rep{{"initial", initial},
           {"stop_reason", to_string(traj.reason)},
           {"steps", traj.steps},
           {"t_final", traj.records.back().t},
           {"max_grad", json_real(traj.max_grad)}};
  if (ref) {
    const auto cls = classify(*traj.records.front().ratios);
    rep["classification"] = {{"ratios", to_json(cls.ratios)}, {"predicted", to_string(cls.predicted)}};
  }
  Json mons = Json::array();
  for (const auto& r : reports) mons.push_back(to_json(r));
  rep["monitors"] = mons;
  Json seq = Json::array();
  for (const auto& p : vanishing_sequence(traj, c.params, c.diagnostics.morawetz_levels))
    seq.push_back({{"t", p.t}, {"R", p.R}, {"localized_potential", p.localized}});
  rep["vanishing_sequence"] = seq;

  const std::string csv = trajectory_csv(traj.records);
  write_text(detail::out_path(c, "trajectory.csv"), csv);
  write_json(detail::out_path(c, "report.json"), rep);
  write_json(detail::out_path(c, "manifest.json"),
             manifest("evolve", c, {{"trajectory.csv", FunctionalRecord::csv_header}, {"report.json", "json"}}));
  log << fmt::format("evolve: {} after {} steps, t = {:.6g}\n", to_string(traj.reason), traj.steps,
                     traj.records.back().t);
  for (const auto& r : reports) log << r.verdict_line() << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct DichotomyRow {
  double c = 0.0;
  InvariantRatios initial{};
  Prediction predicted = Prediction::outside_theory;
  StopReason reason = StopReason::completed;
  double t_stop = 0.0;
  long steps = 0;
  double gm_max = 0.0;
  double q_max = 0.0;
  double q_min = 0.0;
  Verdict scattering = Verdict::inconclusive;
  std::string observed;
  std::string match;
};

inline const char* dichotomy_header =
    "c,EM,GM,PM,predicted,stop_reason,t_stop,steps,GM_max,Q_max,Q_min,scattering_monitor,observed,match";

inline DichotomyRow dichotomy_run(double amp, const GroundState& gs, const ExperimentConfig& c) {
  DichotomyRow row;
  row.c = amp;
  const Field u0 = gs.field(c.grid.n_modes, amp);
  const auto cls = threshold_classifier(u0, gs.ref, c.params);
  row.initial = cls.ratios;
  row.predicted = cls.predicted;
  const auto tr = run(u0, evolve_config_for(c, u0), c.params, &gs.ref);
  row.reason = tr.reason;
  row.t_stop = tr.records.back().t;
  row.steps = tr.steps;
  row.gm_max = -std::numeric_limits<double>::infinity();
  row.q_max = -std::numeric_limits<double>::infinity();
  row.q_min = std::numeric_limits<double>::infinity();
  for (const auto& r : tr.records) {
    row.gm_max = std::max(row.gm_max, r.ratios->GM);
    row.q_max = std::max(row.q_max, r.Q);
    row.q_min = std::min(row.q_min, r.Q);
  }
  ScatteringOptions so;
  so.R = c.diagnostics.scatter_R;
  so.epsilon = c.diagnostics.epsilon;
  row.scattering = scattering_monitor(tr, so).verdict;

  const bool cap = tr.reason == StopReason::gradient_cap_hit;
  if (cap && row.q_max < 0.0) row.observed = to_string(Prediction::blowup);
  else if (tr.reason == StopReason::completed && row.gm_max < 1.0) row.observed = to_string(Prediction::global_scattering);
  else row.observed = "undetermined";
  row.match = row.predicted == Prediction::outside_theory ? "n/a"
                                                          : (row.observed == to_string(row.predicted) ? "yes" : "no");
  return row;
}

inline std::vector<DichotomyRow> dichotomy_rows(const ExperimentConfig& c, const std::vector<double>& amplitudes,
                                                const GroundState& gs) {
  std::vector<DichotomyRow> rows(amplitudes.size());
  const std::size_t workers = static_cast<std::size_t>(c.dichotomy.workers);
  for (std::size_t start = 0; start < amplitudes.size(); start += workers) {
    std::vector<std::future<DichotomyRow>> batch;
    const std::size_t stop = std::min(amplitudes.size(), start + workers);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(std::launch::async, dichotomy_run, amplitudes[i], std::cref(gs), std::cref(c)));
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

inline int cmd_dichotomy(const ExperimentConfig& c, const std::vector<double>& amplitudes, std::ostream& log) {
  detail::require(!amplitudes.empty(), "dichotomy: no amplitudes given");
  detail::require(c.params.kappa < 0, "dichotomy: the threshold theory concerns the focusing problem (kappa = -1)");
  const GroundState gs = detail::ground_state_for(c, c.groundstate.validation_mode);
  const auto rows = dichotomy_rows(c, amplitudes, gs);

  std::vector<std::string> cols;
  std::istringstream h(dichotomy_header);
  for (std::string col; std::getline(h, col, ',');) cols.push_back(col);
  CsvWriter csv(cols);
  int mismatches = 0;
  for (const auto& r : rows) {
    csv.row({fmt_real(r.c), fmt_real(r.initial.EM), fmt_real(r.initial.GM), fmt_real(r.initial.PM),
             to_string(r.predicted), to_string(r.reason), fmt_real(r.t_stop), std::to_string(r.steps),
             fmt_real(r.gm_max), fmt_real(r.q_max), fmt_real(r.q_min), to_string(r.scattering), r.observed, r.match});
    if (r.match == "no") ++mismatches;
    log << fmt::format("c={:<5g} predicted {:<17} observed {:<17} ({}, t={:.4g}) match {}\n", r.c,
                       to_string(r.predicted), r.observed, to_string(r.reason), r.t_stop, r.match);
  }
  write_text(detail::out_path(c, "dichotomy.csv"), csv.text());
  write_json(detail::out_path(c, "manifest.json"), manifest("dichotomy", c, {{"dichotomy.csv", dichotomy_header}}));
  log << fmt::format("dichotomy: {} mismatches\n", mismatches);
  return mismatches == 0 ? exit_ok : exit_gate;
}

// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  std::string status;  ///< holds | violated | inconclusive | skipped
  double margin = 0.0;
  std::string detail;
};

inline Json to_json(const CheckResult& r) {
  return Json{{"name", r.name}, {"status", r.status}, {"margin", json_real(r.margin)}, {"detail", r.detail}};
}

namespace detail {

/// Runs fn, turning any exception into an inconclusive result.
inline CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
  try {
    auto r = fn();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return {name, "inconclusive", std::numeric_limits<double>::quiet_NaN(), e.what()};
  }
}

inline CheckResult verdict(bool ok, double margin, std::string detail) {
  return {"", ok ? "holds" : "violated", margin, std::move(detail)};
}

}  // namespace detail

inline std::vector<CheckResult> run_checks(const ExperimentConfig& c) {
  using detail::guarded;
  using detail::verdict;
  std::vector<CheckResult> out;
  const PhysParams prm = c.params;
  PhysParams focusing = prm;
  focusing.kappa = -1;

  std::optional<GroundState> gs;
  std::string gs_error;
  try {
    gs = detail::ground_state_for(c, true);
  } catch (const std::exception& e) {
    gs_error = e.what();
  }
  auto need_gs = [&] {
    if (!gs) throw NumericalError("ground state unavailable: " + gs_error);
  };

  out.push_back(guarded("pohozaev", [&] {
    need_gs();
    const auto poh = pohozaev_residuals(*gs);
    const double worst = std::max(poh.mass_identity, poh.gradient_identity);
    return verdict(worst <= 1e-5, 1e-5 - worst, fmt::format("max residual {:.3e}", worst));
  }));
  out.push_back(guarded("euler_lagrange", [&] {
    need_gs();
    const double el = euler_lagrange_residual(*gs);
    return verdict(el <= 1e-4, 1e-4 - el, fmt::format("residual {:.3e}", el));
  }));
  out.push_back(guarded("sharp_constant", [&] {
    need_gs();
    const double d = std::abs(gs->k_opt() * gs->weinstein_value - 1.0);
    return verdict(d <= 1e-4, 1e-4 - d, fmt::format("|K_opt J - 1| = {:.3e}", d));
  }));

  const auto battery_grid = [&] { return make_grid(c.check.n_r, c.check.r_max, c.check.n_modes); };
  auto fields = [&](const PolarGrid& g) {
    std::mt19937_64 rng(c.rng_seed);
    std::vector<Field> fs;
    for (int i = 0; i < c.check.samples; ++i) fs.push_back(detail::random_smooth_field(g, prm, rng));
    return fs;
  };

  out.push_back(guarded("hardy", [&] {
    if (prm.flux_distance() == 0.0)
      return CheckResult{"", "skipped", 0.0, "dist(alpha, Z) = 0: the Hardy constant vanishes"};
    const auto g = battery_grid();
    double margin = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (const auto& u : fields(g)) {
      const auto hp = hardy_check(u, prm);
      margin = std::min(margin, (hp.rhs - hp.lhs) / hp.rhs);
      if (!hp.holds()) ++violations;
    }
    return verdict(violations == 0, margin, fmt::format("{} violations", violations));
  }));
  out.push_back(guarded("gagliardo_nirenberg", [&] {
    need_gs();
    const auto g = battery_grid();
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& u : fields(g)) worst = std::min(worst, gn_deficit(u, gs->ref, prm));
    return verdict(worst >= -1e-6, worst + 1e-6, fmt::format("min deficit {:.6g}", worst));
  }));
  out.push_back(guarded("virial_energy_identity", [&] {
    const auto g = battery_grid();
    const double B = prm.B();
    double worst = 0.0;
    for (const auto& u : fields(g)) {
      const double G = grad_alpha_sq(u, focusing);
      const double rhs = 0.5 * B * energy(u, focusing) - 0.5 * (B - 2.0) * G;
      worst = std::max(worst, std::abs(virial_quantity(u, focusing) - rhs) / std::max(std::abs(rhs), G));
    }
    return verdict(worst <= 1e-10, 1e-10 - worst, fmt::format("max relative defect {:.3e}", worst));
  }));
  out.push_back(guarded("virial_collapse", [&] {
    const auto g = battery_grid();
    double worst = 0.0;
    for (const auto& u : fields(g)) {
      const double q8 = 8.0 * virial_quantity(u, focusing);
      const double v2 = virial_second_derivative(u, RadialWeight::quadratic(), focusing);
      worst = std::max(worst, std::abs(v2 - q8) / std::max(std::abs(q8), grad_alpha_sq(u, focusing)));
    }
    return verdict(worst <= 1e-8, 1e-8 - worst, fmt::format("max relative defect {:.3e}", worst));
  }));
  out.push_back(guarded("shift_equivalence", [&] {
    const auto g = battery_grid();
    int mismatched = 0;
    for (int m = -g.max_mode(); m <= g.max_mode(); ++m)
      if (!(mode_stencil(mode_order(m, prm.alpha + 1.0), g) == mode_stencil(mode_order(m + 1, prm.alpha), g)))
        ++mismatched;
    return verdict(mismatched == 0, -mismatched, fmt::format("{} modes differ", mismatched));
  }));
  out.push_back(guarded("self_adjoint_positive", [&] {
    const auto g = battery_grid();
    std::mt19937_64 rng(c.rng_seed + 1);
    std::normal_distribution<double> nd;
    double asym = 0.0, form_gap = 0.0, min_form = std::numeric_limits<double>::infinity();
    for (int m = -g.max_mode(); m <= g.max_mode(); ++m) {
      const ModeOperator op(m, prm.alpha, g);
      std::vector<cplx> a(g.n_r()), b(g.n_r());
      for (int j = 0; j < g.n_r(); ++j) {
        a[j] = {nd(rng), nd(rng)};
        b[j] = {nd(rng), nd(rng)};
      }
      const auto la = op.apply(a), lb = op.apply(b);
      const cplx lhs = weighted_inner<cplx>(la, b, g), rhs = weighted_inner<cplx>(a, lb, g);
      asym = std::max(asym, std::abs(lhs - rhs) / std::abs(lhs));
      const double form = op.quadratic_form(std::span<const cplx>(a));
      const double direct = weighted_inner<cplx>(la, a, g).real();
      form_gap = std::max(form_gap, std::abs(form - direct) / form);
      min_form = std::min(min_form, form);
    }
    const double worst = std::max(asym, form_gap);
    return verdict(worst <= 1e-12 && min_form > 0.0, 1e-12 - worst,
                   fmt::format("asymmetry {:.2e}, form defect {:.2e}", asym, form_gap));
  }));
  out.push_back(guarded("conservation", [&] {
    const auto g = with_modes(battery_grid(), 1);
    const Field u0 = gaussian_initial(g, prm, c.initial.gaussian_amplitude, c.initial.gaussian_width);
    EvolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.25;
    cfg.record_every = 25;
    const auto tr = run(u0, cfg, prm);
    double dm = 0.0, de = 0.0;
    for (const auto& r : tr.records) {
      dm = std::max(dm, std::abs(r.M / tr.records.front().M - 1.0));
      de = std::max(de, std::abs(r.E - tr.records.front().E) / std::abs(tr.records.front().E));
    }
    return verdict(tr.reason == StopReason::completed && dm <= 1e-9 && de <= 1e-5, std::min(1e-9 - dm, 1e-5 - de),
                   fmt::format("mass drift {:.2e}, energy drift {:.2e}", dm, de));
  }));
  return out;
}

inline int cmd_check(const ExperimentConfig& c, std::ostream& log) {
  const auto results = run_checks(c);
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back(to_json(r));
    if (r.status != "holds" && r.status != "skipped") all = false;
    log << fmt::format("{:<24} {:<12} {}\n", r.name, r.status, r.detail);
  }
  write_json(detail::out_path(c, "check-report.json"), Json{{"passed", all}, {"checks", arr}});
  write_json(detail::out_path(c, "manifest.json"), manifest("check", c, {{"check-report.json", "json"}}));
  return all ? exit_ok : exit_gate;
}

}  // namespace abnls
