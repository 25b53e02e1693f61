// tbhybrid: figure sweeps, single operating points and engine verification
// for the time-bin hybrid entanglement generator.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiments.hpp"

namespace {

using tbh::cli::ConfigError;
using tbh::cli::ExperimentConfig;

enum ExitCode { ok = 0, unexpected = 1, config_error = 2, verify_breach = 3, engine_failure = 4 };

int fail(ExitCode code, const std::string& kind, const std::string& message) {
  nlohmann::ordered_json rec;
  rec["error"] = kind;
  rec["message"] = message;
  rec["exit_code"] = static_cast<int>(code);
  std::cerr << rec.dump() << "\n";
  return code;
}

tbh::EngineKind parse_engine(const std::string& s) {
  if (s == "dense") return tbh::EngineKind::dense;
  if (s == "branch") return tbh::EngineKind::branch;
  if (s == "auto") return tbh::EngineKind::automatic;
  throw ConfigError("engine must be dense, branch or auto");
}

tbh::HeraldKind parse_herald(const std::string& s) {
  if (s == "ideal") return tbh::HeraldKind::ideal;
  if (s == "simple") return tbh::HeraldKind::simple;
  throw ConfigError("herald must be ideal or simple");
}

tbh::cli::Format parse_format(const std::string& s) {
  if (s == "csv") return tbh::cli::Format::csv;
  if (s == "json") return tbh::cli::Format::json;
  throw ConfigError("format must be csv or json");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("not a number list: " + text);
    }
  }
  return out;
}

// Raw option values as strings, filled from the config file and then from flags.
using Settings = std::map<std::string, std::string>;

void apply_settings(ExperimentConfig& cfg, const Settings& s) {
  auto num = [](const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("option " + key + " expects a number, got '" + v + "'");
    }
  };
  for (const auto& [key, v] : s) {
    if (key == "experiment") cfg.experiment = tbh::cli::parse_experiment(v);
    else if (key == "alpha") cfg.alpha = num(key, v);
    else if (key == "r") cfg.r = num(key, v);
    else if (key == "r-alpha") cfg.r_alpha = num(key, v);
    else if (key == "eta") cfg.eta = num(key, v);
    else if (key == "etas") cfg.etas = parse_list(v);
    else if (key == "zeta") cfg.zeta = num(key, v);
    else if (key == "lambda2") cfg.lambda2 = num(key, v);
    else if (key == "lc-km") cfg.lc_km = num(key, v);
    else if (key == "beta-db-per-km") cfg.beta_db_per_km = num(key, v);
    else if (key == "z-km") cfg.z_km = num(key, v);
    else if (key == "alpha-f") cfg.alpha_f = num(key, v);
    else if (key == "sweep") cfg.sweep = tbh::cli::Sweep::parse(v);
    else if (key == "engine") cfg.engine = parse_engine(v);
    else if (key == "herald") cfg.herald = parse_herald(v);
    else if (key == "dv") cfg.dv = v;
    else if (key == "cv") cfg.cv = v;
    else if (key == "wigner-state") cfg.wigner_state = v;
    else if (key == "projector-sign") cfg.projector_sign = num(key, v);
    else if (key == "grid-points") cfg.grid_points = static_cast<int>(num(key, v));
    else if (key == "grid-half-width") cfg.grid_half_width = num(key, v);
    else if (key == "out") cfg.out = v;
    else if (key == "format") cfg.format = parse_format(v);
    else if (key == "golden") cfg.golden = v;
    else if (key == "write-golden") cfg.write_golden = v == "true" || v == "1";
    else throw ConfigError("unknown option '" + key + "'");
  }
}

Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a flat JSON object");
  Settings s;
  for (auto& [key, value] : j.items()) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '_', '-');
    if (value.is_string()) s[k] = value.get<std::string>();
    else if (value.is_boolean()) s[k] = value.get<bool>() ? "true" : "false";
    else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      s[k] = joined;
    } else if (value.is_number()) s[k] = value.dump();
    else throw ConfigError("config key " + key + " has an unsupported value");
  }
  return s;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-bin hybrid entanglement generator: figure sweeps and engine checks"};
  Settings flags;
  std::string config_path;
  const std::vector<std::pair<std::string, std::string>> options{
      {"experiment", "fig2 | fig3 | fig4 | fig5 | point | verify | wigner"},
      {"alpha", "cat amplitude (fig5: 0.25, otherwise 2)"},
      {"r", "BS1 field reflection"},
      {"r-alpha", "product r*alpha (default 0.075*sqrt 2)"},
      {"eta", "detector efficiency (default 0.95)"},
      {"etas", "comma-separated efficiencies for fig3/fig4"},
      {"zeta", "squeezing parameter of the CV input (default -0.061)"},
      {"lambda2", "SPDC excitation parameter"},
      {"lc-km", "polarization correlation length in km (required by fig2)"},
      {"beta-db-per-km", "fibre loss (default 0.2)"},
      {"z-km", "fibre length"},
      {"alpha-f", "CV qubit amplitude for fig2 (default t*alpha)"},
      {"sweep", "param:start:stop:count:lin|log"},
      {"engine", "dense | branch | auto"},
      {"herald", "ideal | simple"},
      {"dv", "ideal | vacuum | spdc"},
      {"cv", "cat | squeezed"},
      {"wigner-state", "vacuum | ideal | simple"},
      {"projector-sign", "+1 or -1 for the time-bin projection"},
      {"grid-points", "odd number of phase-space points per axis"},
      {"grid-half-width", "phase-space half width (default |alpha_f| + 4)"},
      {"out", "output file (default stdout)"},
      {"format", "csv | json"},
      {"golden", "fig3 regression file for verify"},
  };
  for (const auto& [name, help] : options) app.add_option("--" + name, flags[name], help);
  bool write_golden = false;
  app.add_flag("--write-golden", write_golden, "regenerate the golden file instead of comparing");
  app.add_option("--config", config_path, "flat JSON object of option values; flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(config_error, "config", e.what());
  }

  try {
    Settings merged;
    if (!config_path.empty()) merged = read_config_file(config_path);
    for (const auto& [name, help] : options)
      if (app.count("--" + name) > 0) merged[name] = flags[name];
    if (write_golden) merged["write-golden"] = "true";

    ExperimentConfig cfg;
    apply_settings(cfg, merged);
    const auto report = tbh::cli::run_experiment(cfg);

    if (cfg.experiment == tbh::cli::Experiment::verify) {
      std::cout << report.summary;
      if (!cfg.out.empty()) write_output(cfg.out, report.table.csv());
      return report.passed ? ok : fail(verify_breach, "verify", "analytic and engine values disagree");
    }
    if (cfg.experiment == tbh::cli::Experiment::point && cfg.format == tbh::cli::Format::json) {
      write_output(cfg.out, report.record);
      return ok;
    }
    write_output(cfg.out, cfg.format == tbh::cli::Format::json ? report.table.json() : report.table.csv());
    return ok;
  } catch (const ConfigError& e) {
    return fail(config_error, "config", e.what());
  } catch (const tbh::RangeError& e) {
    return fail(config_error, "range", e.what());
  } catch (const tbh::Error& e) {
    return fail(engine_failure, "engine", e.what());
  } catch (const std::exception& e) {
    return fail(unexpected, "internal", e.what());
  }
}
