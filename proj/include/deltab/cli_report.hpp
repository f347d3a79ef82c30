#pragma once

// Batch front end: `verify`, `report` and `list` over catalog or DSL
// surfaces. Exit codes: 0 pass, 1 check failure, 2 usage/input error.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deltab/checks.hpp"
#include "deltab/error.hpp"
#include "deltab/fd_oracle.hpp"
#include "deltab/surface.hpp"

namespace deltab::cli {

enum class Command { verify, report, list };
enum class Format { json, csv, text };

struct RunConfig {
  Command command{Command::verify};
  std::string surface;    // catalog name
  std::string file;       // DSL file path
  int n1{41}, n2{41};
  std::optional<Domain> domain;
  Tolerances tolerances;
  Format format{Format::json};
  bool oracle{false};
  bool expect_recurrent{false};
  bool expect_minimal{false};
  bool expect_harmonic{false};
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

// Oracle agreement: ||Δb_fd - Δb||_F <= kOracleRelTol * ||Δb||_F + kOracleAbsTol.
inline constexpr double kOracleRelTol = 1e-3;
inline constexpr double kOracleAbsTol = 1e-5;

/// 17 significant digits: round-trips every double.
inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string json_num(double x) { return std::isfinite(x) ? num(x) : "null"; }
inline std::string json_num(const std::optional<double>& x) { return x ? json_num(*x) : "null"; }
inline std::string csv_num(const std::optional<double>& x) { return x ? num(*x) : ""; }

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "u1",      "u2",      "K",         "H",           "b11",          "b12",          "b22",          "lap_b11",
      "lap_b12", "lap_b22", "gauss_res", "codazzi_res", "recurrence_res", "harmonic_res", "phi"};
  return cols;
}

/// Values in csv_columns() order.
inline std::vector<std::optional<double>> row_values(const ResidualReport& r) {
  return {r.point.u1,    r.point.u2,    r.K,           r.H,         r.b[0][0],
          r.b[0][1],     r.b[1][1],     r.lap_b[0][0], r.lap_b[0][1], r.lap_b[1][1],
          r.gauss_res,   r.codazzi_res, r.recurrence_res, r.harmonic_res, r.phi_estimate};
}

struct OracleSample {
  std::optional<Mat2> lap_b;  // empty when the point is too close to the edge
  double excess{0.0};         // ||diff|| / (rel * ||Δb|| + abs); <= 1 passes
};

inline OracleSample oracle_sample(const SurfaceDef& surface, const ResidualReport& r) {
  OracleSample s;
  try {
    const Mat2 lap = fd::oracle_laplacian_b(surface, r.point);
    Mat2 diff{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) diff[i][j] = lap[i][j] - r.lap_b[i][j];
    s.lap_b = lap;
    s.excess = frobenius(diff) / (kOracleRelTol * frobenius(r.lap_b) + kOracleAbsTol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::too_close_to_boundary) throw;
  }
  return s;
}

namespace detail {

inline bool parse_grid(const std::string& text, int& n1, int& n2) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) return false;
  try {
    std::size_t used1 = 0, used2 = 0;
    const std::string a = text.substr(0, x), b = text.substr(x + 1);
    n1 = std::stoi(a, &used1);
    n2 = std::stoi(b, &used2);
    return used1 == a.size() && used2 == b.size() && !a.empty() && !b.empty();
  } catch (const std::exception&) {
    return false;
  }
}

inline std::string json_worst(const WorstPoint& w) {
  return "{\"value\": " + json_num(w.value) + ", \"u1\": " + json_num(w.point.u1) +
         ", \"u2\": " + json_num(w.point.u2) + "}";
}

/// Worst-point aggregates; max_gauss_res is omitted when no grid point is
/// isothermal, since the residual is undefined there.
inline std::vector<std::pair<std::string, const WorstPoint*>> aggregate_fields(const Aggregates& a) {
  std::vector<std::pair<std::string, const WorstPoint*>> out{{"max_H", &a.max_H},
                                                             {"max_recurrence_res", &a.max_recurrence},
                                                             {"max_harmonic_res", &a.max_harmonic},
                                                             {"max_harmonic_ratio", &a.max_harmonic_ratio}};
  if (a.isothermal_points > 0) out.push_back({"max_gauss_res", &a.max_gauss});
  out.insert(out.end(), {{"max_codazzi_res", &a.max_codazzi},
                         {"max_symmetry_res", &a.max_symmetry},
                         {"max_abs_K", &a.max_abs_K},
                         {"max_b_norm", &a.max_b_norm}});
  return out;
}

inline std::vector<std::pair<std::string, double>> tolerance_fields(const Tolerances& t) {
  return {{"tol_H", t.tol_H},         {"tol_rec", t.tol_rec},     {"tol_harm", t.tol_harm},
          {"tol_K", t.tol_K},         {"tol_b", t.tol_b},         {"b_floor", t.b_floor},
          {"tol_gauss", t.tol_gauss}, {"tol_codazzi", t.tol_codazzi}};
}

inline std::string at(const WorstPoint& w) {
  return num(w.value) + " at (" + num(w.point.u1) + ", " + num(w.point.u2) + ")";
}

}  // namespace detail

inline SurfaceDef resolve_surface(const RunConfig& cfg) {
  SurfaceDef s = cfg.file.empty() ? catalog_surface(cfg.surface) : load_surface_file(cfg.file);
  if (cfg.domain) s = s.with_domain(*cfg.domain);
  return s;
}

inline void write_list(const RunConfig& cfg, std::ostream& out) {
  const auto& all = catalog::surfaces();
  if (cfg.format == Format::json) {
    out << "[\n";
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& s = all[i];
      const Domain& d = s.default_domain;
      out << "  {\"name\": " << json_string(s.name) << ", \"formula\": " << json_string(s.formula)
          << ", \"domain\": [" << num(d.u1_min) << ", " << num(d.u1_max) << ", " << num(d.u2_min) << ", "
          << num(d.u2_max) << "]}" << (i + 1 < all.size() ? "," : "") << "\n";
    }
    out << "]\n";
    return;
  }
  for (const auto& s : all) {
    const Domain& d = s.default_domain;
    out << s.name << "\t" << s.formula << "\tdomain: " << num(d.u1_min) << " " << num(d.u1_max) << " "
        << num(d.u2_min) << " " << num(d.u2_max) << "\n";
  }
}

inline int write_report(const RunConfig& cfg, const SurfaceDef& surface, const GridClassification& res,
                        std::ostream& out) {
  std::vector<OracleSample> oracle;
  if (cfg.oracle)
    for (const auto& r : res.reports) oracle.push_back(oracle_sample(surface, r));

  if (cfg.format == Format::csv) {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    if (cfg.oracle) out << ",oracle_lap_b11,oracle_lap_b12,oracle_lap_b22";
    out << "\n";
    for (std::size_t k = 0; k < res.reports.size(); ++k) {
      const auto vals = row_values(res.reports[k]);
      for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << csv_num(vals[i]);
      if (cfg.oracle) {
        const auto& lap = oracle[k].lap_b;
        out << "," << (lap ? num((*lap)[0][0]) : "") << "," << (lap ? num((*lap)[0][1]) : "") << ","
            << (lap ? num((*lap)[1][1]) : "");
      }
      out << "\n";
    }
    return kExitPass;
  }

  const Domain& d = surface.domain();
  out << "{\"surface\": " << json_string(surface.name()) << ", \"grid\": [" << cfg.n1 << ", " << cfg.n2
      << "], \"domain\": [" << num(d.u1_min) << ", " << num(d.u1_max) << ", " << num(d.u2_min) << ", "
      << num(d.u2_max) << "],\n \"points\": [\n";
  const auto& cols = csv_columns();
  for (std::size_t k = 0; k < res.reports.size(); ++k) {
    const auto vals = row_values(res.reports[k]);
    out << "  {";
    for (std::size_t i = 0; i < vals.size(); ++i)
      out << (i ? ", " : "") << json_string(cols[i]) << ": " << json_num(vals[i]);
    if (cfg.oracle) {
      const auto& lap = oracle[k].lap_b;
      out << ", \"oracle_lap_b11\": " << (lap ? json_num((*lap)[0][0]) : "null")
          << ", \"oracle_lap_b12\": " << (lap ? json_num((*lap)[0][1]) : "null")
          << ", \"oracle_lap_b22\": " << (lap ? json_num((*lap)[1][1]) : "null");
    }
    out << "}" << (k + 1 < res.reports.size() ? "," : "") << "\n";
  }
  out << " ]}\n";
  return kExitPass;
}

/// Checks `verify` enforces; each failure is one human-readable line.
inline std::vector<std::string> verify_failures(const RunConfig& cfg, const ClassificationVerdict& v) {
  const Aggregates& a = v.aggregates;
  const Tolerances& t = v.tolerances;
  std::vector<std::string> failures;
  if (a.max_gauss.value > t.tol_gauss) failures.push_back("Gauss equation residual " + detail::at(a.max_gauss));
  if (a.max_codazzi.value > t.tol_codazzi)
    failures.push_back("Codazzi residual " + detail::at(a.max_codazzi));
  if (a.max_symmetry.value > t.tol_codazzi)
    failures.push_back("nabla b symmetry defect " + detail::at(a.max_symmetry));
  if (v.is_minimal && !v.is_delta_recurrent_2K)
    failures.push_back("minimal surface violates Δb = 2Kb: recurrence_res " + detail::at(a.max_recurrence));
  if (v.is_minimal && v.is_delta_harmonic) {
    if (a.max_abs_K.value > t.tol_K)
      failures.push_back("Δ-harmonic minimal surface is not flat: |K| " + detail::at(a.max_abs_K));
    if (a.max_b_norm.value > t.tol_b)
      failures.push_back("Δ-harmonic minimal surface is not planar: ||b|| " + detail::at(a.max_b_norm));
  }
  if (cfg.expect_recurrent && !v.is_delta_recurrent_2K)
    failures.push_back("expected Δ-recurrent φ=2K: recurrence_res " + detail::at(a.max_recurrence));
  if (cfg.expect_minimal && !v.is_minimal) failures.push_back("expected minimal: |H| " + detail::at(a.max_H));
  if (cfg.expect_harmonic && !v.is_delta_harmonic)
    failures.push_back("expected Δ-harmonic: ||Δb||/(1+||b||) " + detail::at(a.max_harmonic_ratio));
  return failures;
}

inline int write_verify(const RunConfig& cfg, const SurfaceDef& surface, const GridClassification& res,
                        std::ostream& out) {
  const ClassificationVerdict& v = res.verdict;
  std::vector<std::string> failures = verify_failures(cfg, v);

  std::size_t checked = 0, skipped = 0;
  WorstPoint worst_oracle;
  if (cfg.oracle) {
    bool first = true;
    for (const auto& r : res.reports) {
      const OracleSample s = oracle_sample(surface, r);
      if (!s.lap_b) {
        ++skipped;
        continue;
      }
      ++checked;
      if (first || s.excess > worst_oracle.value) worst_oracle = {r.point, s.excess};
      first = false;
    }
    if (worst_oracle.value > 1.0)
      failures.push_back("oracle Δb disagrees: excess ratio " + detail::at(worst_oracle));
  }
  const bool pass = failures.empty();
  const Domain& d = surface.domain();

  if (cfg.format == Format::csv) {
    out << "field,value,u1,u2\n";
    out << "surface," << surface.name() << ",,\n";
    out << "status," << (pass ? "pass" : "fail") << ",,\n";
    out << "verdict," << v.summary() << ",,\n";
    out << "points," << v.aggregates.points << ",,\n";
    out << "isothermal_points," << v.aggregates.isothermal_points << ",,\n";
    out << "is_minimal," << (v.is_minimal ? "true" : "false") << ",,\n";
    out << "is_delta_recurrent_2K," << (v.is_delta_recurrent_2K ? "true" : "false") << ",,\n";
    out << "is_delta_harmonic," << (v.is_delta_harmonic ? "true" : "false") << ",,\n";
    for (const auto& [name, w] : detail::aggregate_fields(v.aggregates))
      out << name << "," << num(w->value) << "," << num(w->point.u1) << "," << num(w->point.u2) << "\n";
    for (const auto& [name, value] : detail::tolerance_fields(v.tolerances)) out << name << "," << num(value) << ",,\n";
    if (cfg.oracle)
      out << "oracle_max_excess," << num(worst_oracle.value) << "," << num(worst_oracle.point.u1) << ","
          << num(worst_oracle.point.u2) << "\n";
    for (const auto& f : failures) out << "failure,\"" << f << "\",,\n";
    return pass ? kExitPass : kExitCheckFailure;
  }

  out << "{\n  \"surface\": " << json_string(surface.name()) << ",\n  \"grid\": [" << cfg.n1 << ", " << cfg.n2
      << "],\n  \"domain\": [" << num(d.u1_min) << ", " << num(d.u1_max) << ", " << num(d.u2_min) << ", "
      << num(d.u2_max) << "],\n  \"points\": " << v.aggregates.points
      << ",\n  \"isothermal_points\": " << v.aggregates.isothermal_points << ",\n  \"status\": "
      << (pass ? "\"pass\"" : "\"fail\"") << ",\n  \"verdict\": " << json_string(v.summary())
      << ",\n  \"flags\": {\"is_minimal\": " << (v.is_minimal ? "true" : "false")
      << ", \"is_delta_recurrent_2K\": " << (v.is_delta_recurrent_2K ? "true" : "false")
      << ", \"is_delta_harmonic\": " << (v.is_delta_harmonic ? "true" : "false") << "},\n  \"aggregates\": {";
  bool first = true;
  for (const auto& [name, w] : detail::aggregate_fields(v.aggregates)) {
    out << (first ? "\n" : ",\n") << "    " << json_string(name) << ": " << detail::json_worst(*w);
    first = false;
  }
  out << "\n  },\n  \"tolerances\": {";
  first = true;
  for (const auto& [name, value] : detail::tolerance_fields(v.tolerances)) {
    out << (first ? "" : ", ") << json_string(name) << ": " << num(value);
    first = false;
  }
  out << "},\n";
  if (cfg.oracle)
    out << "  \"oracle\": {\"checked\": " << checked << ", \"skipped\": " << skipped
        << ", \"max_excess\": " << detail::json_worst(worst_oracle) << "},\n";
  out << "  \"failures\": [";
  for (std::size_t i = 0; i < failures.size(); ++i) out << (i ? ", " : "") << json_string(failures[i]);
  out << "]\n}\n";
  return pass ? kExitPass : kExitCheckFailure;
}

/// Execute one parsed configuration.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == Command::list) {
      write_list(cfg, out);
      return kExitPass;
    }
    const SurfaceDef surface = resolve_surface(cfg);
    const Grid grid = Grid::checked(cfg.n1, cfg.n2, surface.domain());
    const GridClassification res = classify_grid(surface, grid, cfg.tolerances);
    if (cfg.command == Command::report) return write_report(cfg, surface, res, out);
    const int code = write_verify(cfg, surface, res, out);
    if (code != kExitPass)
      err << "verify failed for " << surface.name() << " (worst recurrence_res "
          << detail::at(res.verdict.aggregates.max_recurrence) << ")\n";
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// Parse argv-style arguments (args[0] is the program name) and run.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Δb = 2Kb verification engine for parametric surfaces in E3"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid_text = "41x41";
  std::vector<double> domain;
  std::string format;
  std::optional<double> tol_rec, tol_h;

  auto add_surface_options = [&](CLI::App* sub) {
    auto* name = sub->add_option("--surface", cfg.surface, "catalog surface name");
    auto* file = sub->add_option("--file", cfg.file, "surface-definition file");
    name->excludes(file);
    file->excludes(name);
    sub->add_option("--grid", grid_text, "grid size N1xN2 (cell centres)");
    sub->add_option("--domain", domain, "parameter rectangle a b c d")->expected(4);
    sub->add_option("--tol-rec", tol_rec, "recurrence tolerance");
    sub->add_option("--tol-h", tol_h, "minimality tolerance");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--oracle", cfg.oracle, "cross-check Δb against the finite-difference oracle");
  };

  auto* verify = app.add_subcommand("verify", "classify a surface and check the Δ-laws");
  add_surface_options(verify);
  verify->add_flag("--expect-recurrent", cfg.expect_recurrent, "fail unless Δb = 2Kb holds");
  verify->add_flag("--expect-minimal", cfg.expect_minimal, "fail unless H = 0");
  verify->add_flag("--expect-harmonic", cfg.expect_harmonic, "fail unless Δb = 0");
  auto* report = app.add_subcommand("report", "per-point residual rows");
  add_surface_options(report);
  auto* list = app.add_subcommand("list", "catalog surfaces");
  list->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (list->parsed()) {
    cfg.command = Command::list;
    cfg.format = format == "text" ? Format::text : Format::json;
    return run(cfg, out, err);
  }
  cfg.command = verify->parsed() ? Command::verify : Command::report;
  cfg.format = format == "csv" ? Format::csv : Format::json;
  if (cfg.surface.empty() == cfg.file.empty()) {
    err << "error: exactly one of --surface or --file is required\n";
    return kExitUsage;
  }
  if (!detail::parse_grid(grid_text, cfg.n1, cfg.n2) || cfg.n1 < 2 || cfg.n2 < 2) {
    err << "error: --grid must be N1xN2 with N1, N2 >= 2\n";
    return kExitUsage;
  }
  try {
    if (!domain.empty()) cfg.domain = Domain::checked(domain[0], domain[1], domain[2], domain[3]);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (tol_rec) cfg.tolerances.tol_rec = *tol_rec;
  if (tol_h) cfg.tolerances.tol_H = *tol_h;
  if (!(cfg.tolerances.tol_rec > 0.0) || !(cfg.tolerances.tol_H > 0.0)) {
    err << "error: tolerances must be positive\n";
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace deltab::cli
