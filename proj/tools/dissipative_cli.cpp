// dissipative: alpha sweeps, kink detection, sub-Ohmic regime maps and
// oracle comparisons for the dissipative free particle, oscillator and
// spin-boson models.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dissipative/errors.hpp"
#include "dissipative/io.hpp"
#include "dissipative/sweep.hpp"

#ifndef DISSIPATIVE_PRESET_DIR
#define DISSIPATIVE_PRESET_DIR "presets"
#endif

namespace {

using namespace dissipative;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<double> alpha_min, alpha_max;
  std::optional<int> n_points;
  std::optional<double> omega0, omega_c, delta0, lambda0, s, temperature, length;
  std::optional<int> dim;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::vector<std::string> outputs;
  bool include_branch_points = false;
  std::optional<double> ratio_min, ratio_max;
  std::optional<int> ratio_points;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file (flags override its values)");
  cmd->add_option("--model", f.model, "free-particle | oscillator | spin-boson");
  cmd->add_option("--alpha-min", f.alpha_min, "lower end of the alpha grid (excluded)");
  cmd->add_option("--alpha-max", f.alpha_max, "upper end of the alpha grid");
  cmd->add_option("--alpha-points", f.n_points, "number of grid points");
  cmd->add_option("--omega0", f.omega0, "oscillator / reference frequency");
  cmd->add_option("--omega-c", f.omega_c, "bath cutoff of the Gaussian models");
  cmd->add_option("--delta0", f.delta0, "bare tunnelling");
  cmd->add_option("--lambda0", f.lambda0, "spin-boson bath cutoff");
  cmd->add_option("--s", f.s, "bath exponent");
  cmd->add_option("--temperature", f.temperature, "temperature");
  cmd->add_option("--length", f.length, "free-particle normalisation length");
  cmd->add_option("--dim", f.dim, "free-particle dimension");
  cmd->add_option("--format", f.format, "csv | json");
  cmd->add_option("--output", f.output, "output file (default stdout)");
  cmd->add_option("--columns", f.outputs, "requested output columns");
  cmd->add_flag("--include-branch-points", f.include_branch_points, "keep grid points on branch values");
}

void add_ratio_grid(CLI::App* cmd, Flags& f) {
  cmd->add_option("--ratio-min", f.ratio_min, "smallest delta0/lambda0");
  cmd->add_option("--ratio-max", f.ratio_max, "largest delta0/lambda0");
  cmd->add_option("--ratio-points", f.ratio_points, "number of delta0/lambda0 values");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
void overlay(T& target, const std::optional<T>& v) {
  if (v) target = *v;
}

sweep::SweepConfig resolve(const Flags& f, sweep::SweepConfig base = {}) {
  if (f.config) base = io::config_from_json(io::parse_json(read_file(*f.config), *f.config), base);
  if (f.model) base.model = sweep::parse_model(*f.model);
  overlay(base.alpha_min, f.alpha_min);
  overlay(base.alpha_max, f.alpha_max);
  overlay(base.n_points, f.n_points);
  overlay(base.omega0, f.omega0);
  overlay(base.omega_c, f.omega_c);
  overlay(base.delta0, f.delta0);
  overlay(base.lambda0, f.lambda0);
  overlay(base.s, f.s);
  overlay(base.temperature, f.temperature);
  overlay(base.length, f.length);
  overlay(base.dim, f.dim);
  overlay(base.ratio_min, f.ratio_min);
  overlay(base.ratio_max, f.ratio_max);
  overlay(base.ratio_points, f.ratio_points);
  if (f.format) base.format = sweep::parse_format(*f.format);
  if (!f.outputs.empty()) base.outputs = f.outputs;
  if (f.include_branch_points) base.include_branch_points = true;
  return base;
}

/// Writes to --output when given, otherwise stdout. The file is produced in
/// binary mode so line endings are LF on every platform.
template <class Writer>
void emit(const std::optional<std::string>& path, Writer&& write) {
  if (!path) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("output: cannot open '" + *path + "'");
  write(out);
  if (!out) throw ConfigError("output: write to '" + *path + "' failed");
}

std::filesystem::path preset_path(const std::string& name) {
  return std::filesystem::path(DISSIPATIVE_PRESET_DIR) / (name + ".json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement entropy and coherence of dissipative quantum systems"};
  app.require_subcommand(1);

  Flags sweep_flags, kink_flags, map_flags, oracle_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "alpha sweep of one model");
  add_common(sweep_cmd, sweep_flags);

  auto* kink_cmd = app.add_subcommand("kink", "run a sweep and locate a kink in one column");
  add_common(kink_cmd, kink_flags);
  std::string kink_column = sweep::kColS;
  double threshold = 5.0;
  kink_cmd->add_option("--column", kink_column, "column to monitor");
  kink_cmd->add_option("--threshold", threshold, "detection threshold relative to the background");

  auto* map_cmd = app.add_subcommand("regime-map", "sub-Ohmic regime labels on a (delta0/lambda0, alpha) grid");
  add_common(map_cmd, map_flags);
  add_ratio_grid(map_cmd, map_flags);

  auto* oracle_cmd = app.add_subcommand("oracle", "closed forms against brute-force oracles at one coupling");
  add_common(oracle_cmd, oracle_flags);
  sweep::OracleKnobs knobs;
  std::string scheme = "log";
  std::optional<double> oracle_sigma_x;
  oracle_cmd->add_option("--alpha", knobs.alpha, "coupling");
  oracle_cmd->add_option("--modes", knobs.n_modes, "bath modes of the Gaussian oracle");
  oracle_cmd->add_option("--scheme", scheme, "bath discretisation: log | linear");
  oracle_cmd->add_option("--ed-modes", knobs.ed_modes, "bath modes of the spin-boson ED");
  oracle_cmd->add_option("--fock", knobs.fock_cut, "Fock cutoff of the spin-boson ED");
  oracle_cmd->add_option("--sigma-x", oracle_sigma_x, "spin-boson: compare the spin entropy at this <sigma_x>");

  auto* preset_cmd = app.add_subcommand("preset", "run a shipped figure preset");
  std::string preset_name;
  std::optional<std::string> preset_output, preset_format;
  bool list_presets = false;
  preset_cmd->add_option("name", preset_name, "fig1-oscillator | fig1-spinboson | subohmic-map");
  preset_cmd->add_option("--output", preset_output, "output file (default stdout)");
  preset_cmd->add_option("--format", preset_format, "csv | json");
  preset_cmd->add_flag("--list", list_presets, "list available presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
  }

  try {
    if (*sweep_cmd) {
      const auto cfg = resolve(sweep_flags);
      const auto table = sweep::run_sweep(cfg);
      emit(sweep_flags.output, [&](std::ostream& o) { io::write_table(o, table, cfg.format); });
    } else if (*kink_cmd) {
      const auto cfg = resolve(kink_flags);
      const auto table = sweep::run_sweep(cfg);
      const auto report = sweep::detect_kink(table, kink_column, threshold);
      emit(kink_flags.output, [&](std::ostream& o) { io::write_kink(o, report, kink_column, threshold, cfg, cfg.format); });
    } else if (*map_cmd) {
      sweep::SweepConfig base;
      base.model = sweep::Model::kSpinBoson;
      base.s = 0.5;
      base.alpha_min = 0.0;
      base.alpha_max = 0.05;
      base.n_points = 51;
      const auto cfg = resolve(map_flags, base);
      const auto map = sweep::regime_map(cfg);
      emit(map_flags.output, [&](std::ostream& o) { io::write_regime_map(o, map, cfg, cfg.format); });
    } else if (*oracle_cmd) {
      const auto cfg = resolve(oracle_flags);
      if (scheme == "log") knobs.scheme = oracle::Discretization::kLogarithmic;
      else if (scheme == "linear") knobs.scheme = oracle::Discretization::kLinear;
      else throw ConfigError("scheme: expected log or linear");
      knobs.sigma_x = oracle_sigma_x;
      const auto rows = sweep::oracle_run(cfg, knobs);
      emit(oracle_flags.output, [&](std::ostream& o) { io::write_comparison(o, rows, cfg, knobs, cfg.format); });
    } else if (*preset_cmd) {
      if (list_presets) {
        for (const char* name : {"fig1-oscillator", "fig1-spinboson", "subohmic-map"}) std::cout << name << '\n';
        return 0;
      }
      if (preset_name.empty()) throw ConfigError("preset: name required");
      const auto path = preset_path(preset_name);
      if (!std::filesystem::exists(path)) throw ConfigError("preset: unknown preset '" + preset_name + "'");
      const auto doc = io::parse_json(read_file(path.string()), path.string());
      auto cfg = io::config_from_json(doc);
      if (preset_format) cfg.format = sweep::parse_format(*preset_format);
      const std::string command = doc.value("command", "sweep");
      if (command == "sweep") {
        const auto table = sweep::run_sweep(cfg);
        emit(preset_output, [&](std::ostream& o) { io::write_table(o, table, cfg.format); });
      } else if (command == "regime-map") {
        const auto map = sweep::regime_map(cfg);
        emit(preset_output, [&](std::ostream& o) { io::write_regime_map(o, map, cfg, cfg.format); });
      } else {
        throw ConfigError("command: preset command must be sweep or regime-map");
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kConfig);
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kConfig);
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kRegime);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kNumerical);
  }
  return 0;
}
