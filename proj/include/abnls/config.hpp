#pragma once
// Experiment configuration: a flat INI file with one section per concern,
// command-line overrides of the form section.key=value, and an environment
// override for the output directory. Precedence, lowest first: built-in
// defaults, config file, environment, command line.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "abnls/diagnostics.hpp"
#include "abnls/error.hpp"
#include "abnls/groundstate.hpp"
#include "abnls/params.hpp"

namespace abnls {

inline constexpr const char* output_dir_env = "ABNLS_OUT_DIR";

struct GridConfig {
  int n_r = 2048;
  double r_max = 16.0;
  int n_modes = 1;
};

struct EvolveSettings {
  double dt = 1e-3;
  double t_end = 4.0;
  bool adapt = true;
  double dt_floor = 1e-7;
  double gradient_cap_factor = 10.0;  ///< stop once ||grad u|| exceeds this multiple of its initial value
  int record_every = 10;
  int snapshot_every = 5;             ///< records between stored snapshots (monitors need them)
};

struct GroundStateSettings {
  double tol = 1e-10;
  int max_iters = 5000;
  SeedKind seed = SeedKind::gaussian;
  bool validation_mode = false;
};

struct DiagnosticsSettings {
  double scatter_R = 1.0;
  double epsilon = 0.5;
  double blowup_R = 4.0;
  int morawetz_levels = 4;
};

struct InitialSettings {
  std::string spec = "scaled_ground_state 0.5";
  double gaussian_amplitude = 1.5;
  double gaussian_width = 1.0;
};

struct DichotomySettings {
  std::vector<double> amplitudes{0.3, 0.5, 0.8, 1.0, 1.3, 1.5};
  int workers = 4;
};

struct CheckSettings {
  int samples = 100;
  int n_r = 256;
  double r_max = 10.0;
  int n_modes = 9;
};

struct OutputSettings {
  std::string directory = "out";
};

struct ExperimentConfig {
  PhysParams params{};
  GridConfig grid;
  EvolveSettings evolve;
  GroundStateSettings groundstate;
  DiagnosticsSettings diagnostics;
  InitialSettings initial;
  DichotomySettings dichotomy;
  CheckSettings check;
  OutputSettings output;
  unsigned long rng_seed = 20240607;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(b), &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse list entry '" + item + "'");
    }
    if (item.find_first_not_of(" \t", b + used) != std::string::npos)
      throw ConfigError("cannot parse list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

inline std::string join_list(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

template <class T>
void read_into(const boost::property_tree::ptree& pt, const std::string& key, T& target) {
  if (const auto v = pt.get_optional<std::string>(key)) {
    if constexpr (std::is_same_v<T, std::string>) {
      target = *v;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (*v == "true" || *v == "1" || *v == "yes") target = true;
      else if (*v == "false" || *v == "0" || *v == "no") target = false;
      else throw ConfigError("key " + key + ": expected a boolean, got '" + *v + "'");
    } else {
      const auto parsed = pt.get_optional<T>(key);
      if (!parsed) throw ConfigError("key " + key + ": cannot parse '" + *v + "'");
      target = *parsed;
    }
  }
}

}  // namespace detail

/// The configuration as a property tree, every field present.
inline boost::property_tree::ptree to_ptree(const ExperimentConfig& c) {
  boost::property_tree::ptree pt;
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  pt.put("params.alpha", num(c.params.alpha));
  pt.put("params.rho", num(c.params.rho));
  pt.put("params.p", num(c.params.p));
  pt.put("params.kappa", c.params.kappa);
  pt.put("grid.n_r", c.grid.n_r);
  pt.put("grid.r_max", num(c.grid.r_max));
  pt.put("grid.n_modes", c.grid.n_modes);
  pt.put("evolve.dt", num(c.evolve.dt));
  pt.put("evolve.t_end", num(c.evolve.t_end));
  pt.put("evolve.adapt", c.evolve.adapt ? "true" : "false");
  pt.put("evolve.dt_floor", num(c.evolve.dt_floor));
  pt.put("evolve.gradient_cap_factor", num(c.evolve.gradient_cap_factor));
  pt.put("evolve.record_every", c.evolve.record_every);
  pt.put("evolve.snapshot_every", c.evolve.snapshot_every);
  pt.put("groundstate.tol", num(c.groundstate.tol));
  pt.put("groundstate.max_iters", c.groundstate.max_iters);
  pt.put("groundstate.seed", to_string(c.groundstate.seed));
  pt.put("groundstate.validation_mode", c.groundstate.validation_mode ? "true" : "false");
  pt.put("diagnostics.scatter_R", num(c.diagnostics.scatter_R));
  pt.put("diagnostics.epsilon", num(c.diagnostics.epsilon));
  pt.put("diagnostics.blowup_R", num(c.diagnostics.blowup_R));
  pt.put("diagnostics.morawetz_levels", c.diagnostics.morawetz_levels);
  pt.put("initial.spec", c.initial.spec);
  pt.put("initial.gaussian_amplitude", num(c.initial.gaussian_amplitude));
  pt.put("initial.gaussian_width", num(c.initial.gaussian_width));
  pt.put("dichotomy.amplitudes", detail::join_list(c.dichotomy.amplitudes));
  pt.put("dichotomy.workers", c.dichotomy.workers);
  pt.put("check.samples", c.check.samples);
  pt.put("check.n_r", c.check.n_r);
  pt.put("check.r_max", num(c.check.r_max));
  pt.put("check.n_modes", c.check.n_modes);
  pt.put("output.directory", c.output.directory);
  pt.put("run.rng_seed", c.rng_seed);
  return pt;
}

namespace detail {

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [section, tree] : to_ptree(ExperimentConfig{}))
      for (const auto& [key, _] : tree) k.push_back(section + "." + key);
    return k;
  }();
  return keys;
}

inline void reject_unknown(const boost::property_tree::ptree& pt) {
  const auto& keys = known_keys();
  for (const auto& [section, tree] : pt) {
    if (tree.empty()) throw ConfigError("key '" + section + "' must live in a section");
    for (const auto& [key, _] : tree) {
      const std::string full = section + "." + key;
      if (std::find(keys.begin(), keys.end(), full) == keys.end()) throw ConfigError("unknown config key '" + full + "'");
    }
  }
}

}  // namespace detail

/// Overlay the keys present in pt onto c.
inline void apply_ptree(ExperimentConfig& c, const boost::property_tree::ptree& pt) {
  detail::reject_unknown(pt);
  using detail::read_into;
  read_into(pt, "params.alpha", c.params.alpha);
  read_into(pt, "params.rho", c.params.rho);
  read_into(pt, "params.p", c.params.p);
  read_into(pt, "params.kappa", c.params.kappa);
  read_into(pt, "grid.n_r", c.grid.n_r);
  read_into(pt, "grid.r_max", c.grid.r_max);
  read_into(pt, "grid.n_modes", c.grid.n_modes);
  read_into(pt, "evolve.dt", c.evolve.dt);
  read_into(pt, "evolve.t_end", c.evolve.t_end);
  read_into(pt, "evolve.adapt", c.evolve.adapt);
  read_into(pt, "evolve.dt_floor", c.evolve.dt_floor);
  read_into(pt, "evolve.gradient_cap_factor", c.evolve.gradient_cap_factor);
  read_into(pt, "evolve.record_every", c.evolve.record_every);
  read_into(pt, "evolve.snapshot_every", c.evolve.snapshot_every);
  read_into(pt, "groundstate.tol", c.groundstate.tol);
  read_into(pt, "groundstate.max_iters", c.groundstate.max_iters);
  if (const auto s = pt.get_optional<std::string>("groundstate.seed")) c.groundstate.seed = parse_seed_kind(*s);
  read_into(pt, "groundstate.validation_mode", c.groundstate.validation_mode);
  read_into(pt, "diagnostics.scatter_R", c.diagnostics.scatter_R);
  read_into(pt, "diagnostics.epsilon", c.diagnostics.epsilon);
  read_into(pt, "diagnostics.blowup_R", c.diagnostics.blowup_R);
  read_into(pt, "diagnostics.morawetz_levels", c.diagnostics.morawetz_levels);
  read_into(pt, "initial.spec", c.initial.spec);
  read_into(pt, "initial.gaussian_amplitude", c.initial.gaussian_amplitude);
  read_into(pt, "initial.gaussian_width", c.initial.gaussian_width);
  if (const auto s = pt.get_optional<std::string>("dichotomy.amplitudes"))
    c.dichotomy.amplitudes = detail::parse_list(*s);
  read_into(pt, "dichotomy.workers", c.dichotomy.workers);
  read_into(pt, "check.samples", c.check.samples);
  read_into(pt, "check.n_r", c.check.n_r);
  read_into(pt, "check.r_max", c.check.r_max);
  read_into(pt, "check.n_modes", c.check.n_modes);
  read_into(pt, "output.directory", c.output.directory);
  read_into(pt, "run.rng_seed", c.rng_seed);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ExperimentConfig c;
  apply_ptree(c, pt);
  return c;
}

/// Apply one "section.key=value" override.
inline void apply_override(ExperimentConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  if (key.find('.') == std::string::npos) throw ConfigError("override key '" + key + "' needs a section");
  boost::property_tree::ptree pt;
  pt.put(boost::property_tree::ptree::path_type(key, '.'), assignment.substr(eq + 1));
  apply_ptree(c, pt);
}

/// The environment variable overrides the file's output directory; explicit
/// command-line overrides are applied afterwards and win.
inline void apply_environment(ExperimentConfig& c) {
  if (const char* dir = std::getenv(output_dir_env); dir && *dir) c.output.directory = dir;
}

inline void validate(const ExperimentConfig& c) {
  c.params.validate();
  detail::require(c.grid.n_r >= 1 && c.grid.r_max > 0.0 && c.grid.n_modes >= 1, "grid: sizes must be positive");
  detail::require(c.evolve.dt > 0.0 && c.evolve.t_end >= 0.0, "evolve: dt must be positive, t_end nonnegative");
  detail::require(c.evolve.gradient_cap_factor > 1.0, "evolve: gradient_cap_factor must exceed 1");
  detail::require(c.evolve.record_every >= 1 && c.evolve.snapshot_every >= 0, "evolve: bad record cadence");
  detail::require(c.diagnostics.scatter_R > 0.0 && c.diagnostics.epsilon > 0.0 && c.diagnostics.blowup_R > 0.0,
                  "diagnostics: R and epsilon must be positive");
  detail::require(c.dichotomy.workers >= 1, "dichotomy: workers must be >= 1");
  detail::require(c.check.samples >= 1, "check: samples must be >= 1");
}

/// INI text of the resolved configuration.
inline std::string to_ini(const ExperimentConfig& c) {
  std::ostringstream out;
  boost::property_tree::write_ini(out, to_ptree(c));
  return out.str();
}

}  // namespace abnls
