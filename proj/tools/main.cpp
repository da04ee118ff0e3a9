// dtebell command line tool: sweeps and reports for Bell tests on
// time-bin / dissociation-time entangled pairs. Links only the C API of the
// shared library.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "dtebell.h"

namespace {

using dtebell_cli::ConfigError;
using dtebell_cli::ConfigFile;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;

constexpr double kQuarterPi = 0.78539816339744831;

// Full-precision, locale-independent number formatting shared by every
// writer so identical runs emit identical bytes.
std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

class RuntimeFailure : public std::runtime_error {
 public:
  RuntimeFailure(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

void check_status(dtb_status status, const std::string& what) {
  if (status == DTB_OK) {
    return;
  }
  const std::string message = what + ": " + dtb_status_name(status);
  switch (status) {
    case DTB_ERR_INVALID_ARGUMENT:
    case DTB_ERR_UNSUPPORTED_SPLITTING:
    case DTB_ERR_MODE_MISMATCH:
      throw ConfigError(message);
    default:
      throw RuntimeFailure(message, kExitRuntime);
  }
}

struct ParamsHandle {
  dtb_params* ptr = nullptr;
  ~ParamsHandle() { dtb_params_destroy(ptr); }
};

// Common flag overrides; flags win over config file values.
struct Overrides {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string engine;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
};

void load_params(const ConfigFile& config, ParamsHandle& handle) {
  config.require_section("scenario");
  const dtb_status status = dtb_params_create(
      config.get_double("scenario", "mass"),
      config.get_double("scenario", "v_rel"),
      config.get_double("scenario", "sigma_p_cm"),
      config.get_double("scenario", "sigma_p_rel"),
      config.get_double("scenario", "tau"),
      config.get_double("scenario", "phi_tau"), &handle.ptr);
  check_status(status, "invalid [scenario] parameters");
}

dtb_quadrature_spec load_quadrature_spec(const ConfigFile& config) {
  dtb_quadrature_spec spec;
  dtb_quadrature_spec_default(&spec);
  spec.abs_tolerance =
      config.get_double_or("quadrature", "tolerance", spec.abs_tolerance);
  spec.max_depth = config.get_int_or("quadrature", "max_depth", spec.max_depth);
  spec.rule_points =
      config.get_int_or("quadrature", "rule_points", spec.rule_points);
  const int max_panels = config.get_int_or(
      "quadrature", "max_panels", static_cast<int>(spec.max_panels));
  if (max_panels <= 0) {
    throw ConfigError("[quadrature] max_panels must be positive");
  }
  spec.max_panels = static_cast<size_t>(max_panels);
  return spec;
}

dtb_engine resolve_engine(const ConfigFile& config, const std::string& section,
                          const Overrides& overrides) {
  std::string name = config.get_string_or(section, "engine", "closed-form");
  if (!overrides.engine.empty()) {
    name = overrides.engine;
  }
  if (name == "closed-form") {
    return DTB_ENGINE_CLOSED_FORM;
  }
  if (name == "quadrature") {
    return DTB_ENGINE_QUADRATURE;
  }
  throw ConfigError("unknown engine '" + name +
                    "' (expected closed-form or quadrature)");
}

std::string resolve_format(const Overrides& overrides, const ConfigFile& config,
                           const std::string& fallback) {
  std::string format = config.get_string_or("output", "format", fallback);
  if (!overrides.format.empty()) {
    format = overrides.format;
  }
  if (format != "csv" && format != "json" && format != "text") {
    throw ConfigError("unknown output format '" + format + "'");
  }
  return format;
}

// Output sink: --out wins over [output] path; default is stdout.
class Sink {
 public:
  Sink(const Overrides& overrides, const ConfigFile& config) {
    std::string path = config.get_string_or("output", "path", "");
    if (!overrides.out_path.empty()) {
      path = overrides.out_path;
    }
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw ConfigError("cannot open output file: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
}

void write_table(std::ostream& out, const std::string& format,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  if (format == "csv") {
    write_csv(out, header, rows);
    return;
  }
  if (format == "json") {
    ordered_json doc = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json entry;
      for (std::size_t i = 0; i < header.size(); ++i) {
        entry[header[i]] = row[i];
      }
      doc.push_back(entry);
    }
    out << doc.dump(2) << "\n";
    return;
  }
  throw ConfigError("format '" + format + "' is not valid for tabular output");
}

ordered_json chsh_to_json(const dtb_chsh_result& result,
                          const std::string& mode, const std::string& engine) {
  ordered_json doc;
  doc["mode"] = mode;
  if (!engine.empty()) {
    doc["engine"] = engine;
  }
  doc["settings"] = {{"a", result.a},
                     {"a_prime", result.a_prime},
                     {"b", result.b},
                     {"b_prime", result.b_prime}};
  doc["correlations"] = {{"c_ab", result.c_ab},
                         {"c_ab_prime", result.c_ab_prime},
                         {"c_a_prime_b", result.c_a_prime_b},
                         {"c_a_prime_b_prime", result.c_a_prime_b_prime}};
  doc["s"] = result.s;
  doc["violated"] = result.violated != 0;
  return doc;
}

ordered_json feasibility_to_json(const dtb_feasibility& report) {
  return ordered_json{{"fringe_ratio", report.fringe_ratio},
                      {"fringe_threshold", report.threshold},
                      {"fringe_ok", report.fringe_ok != 0},
                      {"visibility_product", report.visibility_product},
                      {"visibility_ok", report.visibility_ok != 0},
                      {"predicted_max_s", report.predicted_max_s}};
}

// ---- subcommands ------------------------------------------------------

int cmd_tbe_correlation(const Overrides& overrides) {
  const ConfigFile config = ConfigFile::parse_file(overrides.config_path);
  config.require_section("tbe");
  const double phi_tau = config.get_double_or("tbe", "phi_tau", 0.0);
  const double theta1 = config.get_double_or("tbe", "theta1", kQuarterPi);
  const double theta2 = config.get_double_or("tbe", "theta2", kQuarterPi);
  const double phi1_start = config.get_double("tbe", "phi1_start");
  const double phi1_stop = config.get_double("tbe", "phi1_stop");
  const int phi1_count = config.get_int("tbe", "phi1_count");
  const double phi2_start = config.get_double("tbe", "phi2_start");
  const double phi2_stop = config.get_double("tbe", "phi2_stop");
  const int phi2_count = config.get_int("tbe", "phi2_count");
  if (phi1_count < 1 || phi2_count < 1) {
    throw ConfigError("[tbe] grid counts must be >= 1");
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(phi1_count) * phi2_count);
  for (int i = 0; i < phi1_count; ++i) {
    const double phi1 =
        phi1_count == 1
            ? phi1_start
            : phi1_start + (phi1_stop - phi1_start) * i / (phi1_count - 1);
    for (int j = 0; j < phi2_count; ++j) {
      const double phi2 =
          phi2_count == 1
              ? phi2_start
              : phi2_start + (phi2_stop - phi2_start) * j / (phi2_count - 1);
      double correlation = 0.0;
      check_status(dtb_tbe_correlation(phi1, phi2, theta1, theta2, phi_tau,
                                       &correlation),
                   "tbe correlation");
      rows.push_back({phi1, phi2, theta1, theta2, correlation});
    }
  }
  Sink sink(overrides, config);
  write_table(sink.stream(), resolve_format(overrides, config, "csv"),
              {"phi1", "phi2", "theta1", "theta2", "C"}, rows);
  return kExitOk;
}

int cmd_dte_fringe(const Overrides& overrides, bool fit_contrast) {
  const ConfigFile config = ConfigFile::parse_file(overrides.config_path);
  ParamsHandle params;
  load_params(config, params);
  config.require_section("fringe");
  const double ell2 = config.get_double("fringe", "ell2");
  const double start = config.get_double("fringe", "ell1_start");
  const double stop = config.get_double("fringe", "ell1_stop");
  const int count = config.get_int("fringe", "ell1_count");
  if (count < 2) {
    throw ConfigError("[fringe] ell1_count must be >= 2");
  }
  const dtb_engine engine = resolve_engine(config, "fringe", overrides);
  const dtb_quadrature_spec spec = load_quadrature_spec(config);

  std::vector<dtb_fringe_row> scan(static_cast<std::size_t>(count));
  check_status(
      dtb_dte_fringe_scan(params.ptr, ell2, start, stop, count, scan.data()),
      "fringe scan");
  if (engine == DTB_ENGINE_QUADRATURE) {
    for (dtb_fringe_row& row : scan) {
      double probability[4];
      double error[4];
      const dtb_status status =
          dtb_dte_quadrature_gaussian(params.ptr, row.ell1, ell2, kQuarterPi,
                                      kQuarterPi, &spec, probability, error);
      check_status(status, "fringe quadrature");
      row.p_pp = probability[0];
      row.p_pm = probability[1];
      row.p_mp = probability[2];
      row.p_mm = probability[3];
      row.engine_error = std::max(std::max(error[0], error[1]),
                                  std::max(error[2], error[3]));
    }
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(scan.size());
  double p_max = scan.front().p_pp;
  double p_min = scan.front().p_pp;
  for (const dtb_fringe_row& row : scan) {
    p_max = std::max(p_max, row.p_pp);
    p_min = std::min(p_min, row.p_pp);
    rows.push_back({row.ell1, ell2, row.p_pp, row.p_pm, row.p_mp, row.p_mm,
                    row.visibility, row.engine_error});
  }
  Sink sink(overrides, config);
  write_table(sink.stream(), resolve_format(overrides, config, "csv"),
              {"ell1", "ell2", "P_pp", "P_pm", "P_mp", "P_mm", "visibility",
               "engine_error"},
              rows);
  if (fit_contrast) {
    // Estimated contrast of the scanned P_pp column; a sanity check against
    // the analytic visibility column, not part of the data schema.
    const double contrast = (p_max - p_min) / (p_max + p_min);
    std::cerr << "fitted contrast (P_pp over scan): "
              << format_double(contrast) << "\n";
  }
  return kExitOk;
}

int cmd_chsh(const Overrides& overrides) {
  const ConfigFile config = ConfigFile::parse_file(overrides.config_path);
  config.require_section("chsh");
  const std::string mode = config.get_string("chsh", "mode");
  Sink sink(overrides, config);
  const std::string format = resolve_format(overrides, config, "json");
  if (format != "json") {
    throw ConfigError("chsh reports are JSON; use --format json");
  }

  if (mode == "tbe") {
    const double phi_tau = config.get_double("chsh", "phi_tau");
    dtb_chsh_result result;
    if (config.get_bool_or("chsh", "use_maximal", false)) {
      check_status(dtb_chsh_tbe_maximal(phi_tau, &result), "chsh");
    } else {
      check_status(dtb_chsh_tbe(phi_tau, config.get_double("chsh", "a"),
                                config.get_double("chsh", "a_prime"),
                                config.get_double("chsh", "b"),
                                config.get_double("chsh", "b_prime"), &result),
                   "chsh");
    }
    sink.stream() << chsh_to_json(result, "tbe", "").dump(2) << "\n";
    return kExitOk;
  }
  if (mode != "dte") {
    throw ConfigError("[chsh] mode must be tbe or dte");
  }

  ParamsHandle params;
  load_params(config, params);
  const dtb_engine engine = resolve_engine(config, "chsh", overrides);
  const dtb_quadrature_spec spec = load_quadrature_spec(config);
  dtb_chsh_result result;
  if (config.get_bool_or("chsh", "optimize", false)) {
    check_status(dtb_chsh_optimize_dte(params.ptr, engine, &spec, &result),
                 "chsh optimization");
  } else {
    check_status(dtb_chsh_dte(params.ptr, config.get_double("chsh", "a"),
                              config.get_double("chsh", "a_prime"),
                              config.get_double("chsh", "b"),
                              config.get_double("chsh", "b_prime"), engine,
                              &spec, &result),
                 "chsh");
  }
  const double threshold = overrides.threshold.value_or(
      config.get_double_or("conditions", "threshold", 0.01));
  dtb_feasibility feasibility;
  check_status(dtb_feasibility_conditions(params.ptr, threshold, &feasibility),
               "feasibility conditions");

  ordered_json doc = chsh_to_json(
      result, "dte",
      engine == DTB_ENGINE_QUADRATURE ? "quadrature" : "closed-form");
  doc["predicted_max_s"] = feasibility.predicted_max_s;
  doc["conditions"] = feasibility_to_json(feasibility);
  sink.stream() << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const Overrides& overrides) {
  const ConfigFile config = ConfigFile::parse_file(overrides.config_path);
  const int draws = config.get_int_or("validate", "draws", 100);
  if (draws < 1) {
    throw ConfigError("[validate] draws must be >= 1");
  }
  const std::uint64_t seed =
      overrides.seed.value_or(config.get_uint64_or("validate", "seed", 42));
  const double tolerance = config.get_double_or("validate", "tolerance", 1e-6);
  const dtb_quadrature_spec spec = load_quadrature_spec(config);

  std::vector<dtb_validation_row> rows(static_cast<std::size_t>(draws));
  dtb_validation_summary summary;
  check_status(
      dtb_validate_run(seed, draws, tolerance, &spec, rows.data(), &summary),
      "validation run");

  ordered_json doc;
  doc["generator"] = "mt19937-64";
  doc["seed"] = summary.seed;
  doc["draws"] = summary.draws;
  doc["tolerance"] = summary.tolerance;
  doc["quadrature"] = {{"tolerance", spec.abs_tolerance},
                       {"max_depth", spec.max_depth},
                       {"rule_points", spec.rule_points},
                       {"max_panels", spec.max_panels}};
  doc["max_abs_deviation"] = summary.max_abs_deviation;
  doc["pass"] = summary.pass != 0;
  ordered_json row_array = ordered_json::array();
  for (const dtb_validation_row& row : rows) {
    row_array.push_back(
        ordered_json{{"mass", row.mass},
                     {"v_rel", row.v_rel},
                     {"sigma_p_cm", row.sigma_p_cm},
                     {"sigma_p_rel", row.sigma_p_rel},
                     {"tau", row.tau},
                     {"phi_tau", row.phi_tau},
                     {"ell1", row.ell1},
                     {"ell2", row.ell2},
                     {"p_closed", row.p_closed},
                     {"p_quadrature", row.p_quadrature},
                     {"quadrature_error", row.quadrature_error},
                     {"max_abs_deviation", row.max_abs_deviation}});
  }
  doc["rows"] = std::move(row_array);
  Sink sink(overrides, config);
  const std::string format = resolve_format(overrides, config, "json");
  if (format != "json") {
    throw ConfigError("validate reports are JSON; use --format json");
  }
  sink.stream() << doc.dump(2) << "\n";
  return summary.pass != 0 ? kExitOk : kExitTolerance;
}

int cmd_conditions(const Overrides& overrides) {
  const ConfigFile config = ConfigFile::parse_file(overrides.config_path);
  ParamsHandle params;
  load_params(config, params);
  const double threshold = overrides.threshold.value_or(
      config.get_double_or("conditions", "threshold", 0.01));
  dtb_feasibility report;
  check_status(dtb_feasibility_conditions(params.ptr, threshold, &report),
               "feasibility conditions");
  double t_cm = 0.0;
  double t_rel = 0.0;
  double lambdabar = 0.0;
  check_status(dtb_derived_scales(params.ptr, &t_cm, &t_rel, &lambdabar),
               "derived scales");

  Sink sink(overrides, config);
  const std::string format = resolve_format(overrides, config, "text");
  if (format == "json") {
    ordered_json doc = feasibility_to_json(report);
    doc["derived"] = {{"t_cm", t_cm},
                      {"t_rel", t_rel},
                      {"lambdabar_rel", lambdabar}};
    sink.stream() << doc.dump(2) << "\n";
    return kExitOk;
  }
  if (format != "text") {
    throw ConfigError("conditions reports are text or JSON");
  }
  std::ostream& out = sink.stream();
  out << "derived scales:       T_cm = " << format_double(t_cm)
      << " s, T_rel = " << format_double(t_rel)
      << " s, lambdabar_rel = " << format_double(lambdabar) << " m\n";
  if (std::isinf(report.fringe_ratio)) {
    out << "fringe condition:     tau = 0 leaves no fringe window near the "
           "matched point (ratio infinite) -> FAIL\n";
  } else {
    out << "fringe condition:     lambdabar/(tau v_rel) = "
        << format_double(report.fringe_ratio)
        << (report.fringe_ok ? " < " : " >= ")
        << format_double(report.threshold)
        << (report.fringe_ok ? " -> pass\n" : " -> FAIL\n");
  }
  out << "visibility condition: (1+(tau/T_cm)^2)(1+(tau/T_rel)^2) = "
      << format_double(report.visibility_product)
      << (report.visibility_ok ? " < 4 -> pass\n" : " >= 4 -> FAIL\n");
  out << "predicted max CHSH S: " << format_double(report.predicted_max_s)
      << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bell-test analysis for dissociation-time-entangled matter waves: "
      "joint port probabilities behind switched asymmetric Mach-Zehnder "
      "interferometers, CHSH values, and dispersion feasibility checks."};
  app.require_subcommand(1);

  Overrides overrides;
  std::string seed_text;
  std::string threshold_text;
  bool fit_contrast = false;
  std::string command;

  const auto add_common = [&](CLI::App* sub, bool with_engine) {
    sub->add_option("--config", overrides.config_path,
                    "Path to the key = value configuration file")
        ->required();
    sub->add_option("--out", overrides.out_path,
                    "Output path (default: stdout)");
    sub->add_option("--format", overrides.format,
                    "Output format: csv, json, or text (command-dependent)");
    if (with_engine) {
      sub->add_option("--engine", overrides.engine,
                      "Engine: closed-form or quadrature");
    }
  };

  CLI::App* tbe = app.add_subcommand(
      "tbe-correlation",
      "Correlation on a (phi1, phi2) grid.\n"
      "CSV columns: phi1,phi2,theta1,theta2,C");
  add_common(tbe, false);
  tbe->callback([&] { command = "tbe-correlation"; });

  CLI::App* fringe = app.add_subcommand(
      "dte-fringe",
      "Joint probabilities along an ell1 scan at fixed ell2.\n"
      "CSV columns: ell1,ell2,P_pp,P_pm,P_mp,P_mm,visibility,engine_error");
  add_common(fringe, true);
  fringe->add_flag("--fit-contrast", fit_contrast,
                   "Also report the fitted P_pp contrast on stderr");
  fringe->callback([&] { command = "dte-fringe"; });

  CLI::App* chsh = app.add_subcommand(
      "chsh", "CHSH report (JSON): settings, correlations, S, verdict");
  add_common(chsh, true);
  chsh->add_option("--threshold", threshold_text,
                   "Operational threshold for the fringe condition");
  chsh->callback([&] { command = "chsh"; });

  CLI::App* validate = app.add_subcommand(
      "validate",
      "Closed form vs quadrature on seeded random scenarios (JSON report; "
      "exit 3 when the tolerance is exceeded)");
  add_common(validate, false);
  validate->add_option("--seed", seed_text,
                       "Seed for the scenario generator (mt19937-64)");
  validate->callback([&] { command = "validate"; });

  CLI::App* conditions = app.add_subcommand(
      "conditions",
      "Feasibility report: fringe-scale and visibility conditions");
  add_common(conditions, false);
  conditions->add_option("--threshold", threshold_text,
                         "Operational threshold for the fringe condition");
  conditions->callback([&] { command = "conditions"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return kExitConfig;
  }

  try {
    if (!seed_text.empty()) {
      std::size_t consumed = 0;
      overrides.seed = std::stoull(seed_text, &consumed);
      if (consumed != seed_text.size()) {
        throw ConfigError("--seed is not an unsigned integer: " + seed_text);
      }
    }
    if (!threshold_text.empty()) {
      std::size_t consumed = 0;
      overrides.threshold = std::stod(threshold_text, &consumed);
      if (consumed != threshold_text.size()) {
        throw ConfigError("--threshold is not a number: " + threshold_text);
      }
    }
    if (command == "tbe-correlation") return cmd_tbe_correlation(overrides);
    if (command == "dte-fringe") return cmd_dte_fringe(overrides, fit_contrast);
    if (command == "chsh") return cmd_chsh(overrides);
    if (command == "validate") return cmd_validate(overrides);
    if (command == "conditions") return cmd_conditions(overrides);
    std::cerr << "no subcommand selected\n";
    return kExitConfig;
  } catch (const ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return kExitConfig;
  } catch (const RuntimeFailure& error) {
    std::cerr << "error: " << error.what() << "\n";
    return error.exit_code();
  } catch (const std::invalid_argument& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitRuntime;
  }
}
