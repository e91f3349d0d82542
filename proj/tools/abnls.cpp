// abnls: deterministic experiment runner.
//
//   abnls [--config FILE] [--set section.key=value ...] [--out DIR] <command>
//
// Commands: groundstate | evolve [--initial SPEC] | dichotomy [--amplitudes LIST] | check

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abnls/config.hpp"
#include "abnls/error.hpp"
#include "abnls/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the Aharonov-Bohm inhomogeneous NLS"};
  app.set_version_flag("--version", std::string(ABNLS_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  app.add_option("-c,--config", config_path, "INI configuration file");
  app.add_option("-s,--set", overrides, "override a key, e.g. --set grid.n_r=1024");
  app.add_option("-o,--out", out_dir, "output directory (overrides config and environment)");

  auto* gs_cmd = app.add_subcommand("groundstate", "compute the ground state and the sharp constant");
  auto* ev_cmd = app.add_subcommand("evolve", "evolve initial data and run the monitors");
  std::string initial;
  ev_cmd->add_option("-i,--initial", initial,
                     "gaussian [amp [width]] | scaled_ground_state c | file PATH (default: initial.spec)");
  auto* di_cmd = app.add_subcommand("dichotomy", "classify and evolve c * phi for a list of amplitudes");
  std::string amplitudes;
  di_cmd->add_option("-a,--amplitudes", amplitudes, "comma-separated amplitudes (default: dichotomy.amplitudes)");
  auto* ck_cmd = app.add_subcommand("check", "run the invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : abnls::exit_config;
  }

  try {
    abnls::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = abnls::load_config(config_path);
    abnls::apply_environment(cfg);
    for (const auto& o : overrides) abnls::apply_override(cfg, o);
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    abnls::validate(cfg);

    if (*gs_cmd) return abnls::cmd_groundstate(cfg, std::cout);
    if (*ev_cmd) return abnls::cmd_evolve(cfg, initial.empty() ? cfg.initial.spec : initial, std::cout);
    if (*di_cmd) {
      const auto list = amplitudes.empty() ? cfg.dichotomy.amplitudes : abnls::detail::parse_list(amplitudes);
      return abnls::cmd_dichotomy(cfg, list, std::cout);
    }
    if (*ck_cmd) return abnls::cmd_check(cfg, std::cout);
  } catch (const abnls::IoError& e) {
    std::cerr << "abnls: I/O error: " << e.what() << '\n';
    return abnls::exit_io;
  } catch (const abnls::ConfigError& e) {
    std::cerr << "abnls: configuration error: " << e.what() << '\n';
    return abnls::exit_config;
  } catch (const abnls::NumericalError& e) {
    std::cerr << "abnls: numerical failure: " << e.what() << '\n';
    return abnls::exit_gate;
  }
  return abnls::exit_config;
}
