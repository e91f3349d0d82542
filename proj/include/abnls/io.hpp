#pragma once
// Output writers. Floats go out with 17 significant digits so files
// round-trip bit-exactly; nothing time- or host-dependent is written, which
// keeps reruns byte-identical.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "abnls/config.hpp"
#include "abnls/diagnostics.hpp"
#include "abnls/error.hpp"
#include "abnls/functionals.hpp"
#include "abnls/grid.hpp"

namespace abnls {

using Json = nlohmann::ordered_json;

inline constexpr int csv_schema_version = 1;

inline std::string fmt_real(double v) { return fmt::format("{:.17g}", v); }

/// Non-finite numbers become null so the output stays valid JSON.
inline Json json_real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ += (i ? "," : "") + columns_[i];
    out_ += '\n';
  }
  void row(const std::vector<std::string>& cells) {
    detail::require(cells.size() == columns_.size(), "csv: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ += (i ? "," : "") + cells[i];
    out_ += '\n';
  }
  std::string header() const { return out_.substr(0, out_.find('\n')); }
  const std::string& text() const { return out_; }

 private:
  std::vector<std::string> columns_;
  std::string out_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string trajectory_csv(const std::vector<FunctionalRecord>& recs) {
  std::vector<std::string> cols;
  std::istringstream h(FunctionalRecord::csv_header);
  for (std::string c; std::getline(h, c, ',');) cols.push_back(c);
  CsvWriter w(cols);
  for (const auto& r : recs) {
    auto opt = [&](double InvariantRatios::*f) { return r.ratios ? fmt_real((*r.ratios).*f) : std::string(); };
    w.row({fmt_real(r.t), fmt_real(r.M), fmt_real(r.E), fmt_real(r.P), fmt_real(r.Q), fmt_real(r.grad_alpha_sq),
           fmt_real(r.grad_sq), opt(&InvariantRatios::EM), opt(&InvariantRatios::GM), opt(&InvariantRatios::PM),
           fmt_real(r.V)});
  }
  return w.text();
}

inline Json to_json(const MonitorReport& r) {
  Json ev = Json::object();
  for (const auto& [k, v] : r.evidence) ev[k] = json_real(v);
  return Json{{"monitor", r.monitor}, {"verdict", to_string(r.verdict)}, {"summary", r.summary},
              {"evidence", ev},       {"notes", r.notes}};
}

inline Json to_json(const InvariantRatios& q) {
  return Json{{"EM", json_real(q.EM)}, {"GM", json_real(q.GM)}, {"PM", json_real(q.PM)}};
}

inline Json to_json(const PhysParams& p) {
  return Json{{"alpha", p.alpha}, {"rho", p.rho}, {"p", p.p}, {"kappa", p.kappa}};
}

inline Json config_json(const ExperimentConfig& c) {
  Json j = Json::object();
  for (const auto& [section, tree] : to_ptree(c)) {
    Json s = Json::object();
    for (const auto& [key, value] : tree) s[key] = value.data();
    j[section] = s;
  }
  return j;
}

/// manifest.json: the resolved configuration and what was written.
inline Json manifest(const std::string& command, const ExperimentConfig& c, const Json& files) {
  return Json{{"artifact", "abnls"},
              {"version", ABNLS_VERSION},
              {"command", command},
              {"csv_schema_version", csv_schema_version},
              {"config", config_json(c)},
              {"files", files}};
}

/// Reads a radial profile written as CSV with columns r,re[,im] on exactly the
/// nodes of grid; the angular direction is filled by repetition.
inline Field read_radial_field(const std::filesystem::path& path, const PolarGrid& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open initial data file '" + path.string() + "'");
  std::string line;
  std::getline(in, line);  // header
  ModeStack s(grid);
  int j = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) {
      try {
        cells.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw IoError("initial data: unparsable value '" + c + "' on line " + std::to_string(j + 2));
      }
    }
    if (cells.size() < 2 || cells.size() > 3) throw IoError("initial data: expected columns r,re[,im]");
    if (j >= grid.n_r()) throw ConfigError("initial data: more rows than radial nodes");
    if (std::abs(cells[0] - grid.r(j)) > 1e-9 * grid.r_max())
      throw ConfigError("initial data: row " + std::to_string(j) + " is not on the configured radial grid");
    s.mode(0)[j] = cplx(cells[1], cells.size() == 3 ? cells[2] : 0.0);
    ++j;
  }
  if (j != grid.n_r()) throw ConfigError("initial data: expected " + std::to_string(grid.n_r()) + " rows");
  return synthesize(s);
}

}  // namespace abnls
