#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dissipative/errors.hpp"
#include "dissipative/sweep.hpp"

namespace dissipative::io {

using Json = nlohmann::ordered_json;

/// 12 significant digits, '.' separator, "nan"/"inf" for non-finite values.
/// Negative zero prints as 0.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// JSON value carrying exactly the digits of format_number; null if not finite.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

// ---------------------------------------------------------------------------
// Config <-> JSON
// ---------------------------------------------------------------------------

inline Json to_json(const sweep::SweepConfig& c) {
  Json j;
  j["model"] = sweep::to_string(c.model);
  j["grid"] = {{"alpha_min", json_number(c.alpha_min)},
               {"alpha_max", json_number(c.alpha_max)},
               {"n_points", c.n_points},
               {"include_branch_points", c.include_branch_points}};
  j["fixed"] = {{"omega0", json_number(c.omega0)},   {"omega_c", json_number(c.omega_c)},
                {"delta0", json_number(c.delta0)},   {"lambda0", json_number(c.lambda0)},
                {"s", json_number(c.s)},             {"temperature", json_number(c.temperature)},
                {"length", json_number(c.length)},   {"dim", c.dim}};
  j["outputs"] = sweep::resolved_outputs(c);
  j["format"] = sweep::to_string(c.format);
  j["regime_map"] = {{"ratio_min", json_number(c.ratio_min)},
                     {"ratio_max", json_number(c.ratio_max)},
                     {"ratio_points", c.ratio_points}};
  return j;
}

namespace detail {

template <class T>
T get_field(const Json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(name + ": wrong type in config file");
  }
}

template <class F>
void for_fields(const Json& obj, const std::string& section, F&& f) {
  if (!obj.is_object()) throw ConfigError(section + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) f(it.key(), it.value());
}

}  // namespace detail

/// Overlays a JSON document onto `base`; keys absent from the document keep
/// their value. Unknown keys are rejected. A top-level "command" key (used by
/// presets) is accepted and ignored here.
inline sweep::SweepConfig config_from_json(const Json& j, sweep::SweepConfig base = {}) {
  using detail::get_field;
  detail::for_fields(j, "config", [&](const std::string& key, const Json& v) {
    if (key == "model") {
      base.model = sweep::parse_model(get_field<std::string>(v, key));
    } else if (key == "format") {
      base.format = sweep::parse_format(get_field<std::string>(v, key));
    } else if (key == "outputs") {
      base.outputs = get_field<std::vector<std::string>>(v, key);
    } else if (key == "command") {
    } else if (key == "grid") {
      detail::for_fields(v, key, [&](const std::string& k, const Json& g) {
        if (k == "alpha_min") base.alpha_min = get_field<double>(g, k);
        else if (k == "alpha_max") base.alpha_max = get_field<double>(g, k);
        else if (k == "n_points") base.n_points = get_field<int>(g, k);
        else if (k == "include_branch_points") base.include_branch_points = get_field<bool>(g, k);
        else throw ConfigError("grid." + k + ": unknown field");
      });
    } else if (key == "fixed") {
      detail::for_fields(v, key, [&](const std::string& k, const Json& g) {
        if (k == "omega0") base.omega0 = get_field<double>(g, k);
        else if (k == "omega_c") base.omega_c = get_field<double>(g, k);
        else if (k == "delta0") base.delta0 = get_field<double>(g, k);
        else if (k == "lambda0") base.lambda0 = get_field<double>(g, k);
        else if (k == "s") base.s = get_field<double>(g, k);
        else if (k == "temperature") base.temperature = get_field<double>(g, k);
        else if (k == "length") base.length = get_field<double>(g, k);
        else if (k == "dim") base.dim = get_field<int>(g, k);
        else throw ConfigError("fixed." + k + ": unknown field");
      });
    } else if (key == "regime_map") {
      detail::for_fields(v, key, [&](const std::string& k, const Json& g) {
        if (k == "ratio_min") base.ratio_min = get_field<double>(g, k);
        else if (k == "ratio_max") base.ratio_max = get_field<double>(g, k);
        else if (k == "ratio_points") base.ratio_points = get_field<int>(g, k);
        else throw ConfigError("regime_map." + k + ": unknown field");
      });
    } else {
      throw ConfigError(key + ": unknown config field");
    }
  });
  return base;
}

inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

inline void write_config_header(std::ostream& out, const sweep::SweepConfig& c) {
  out << "# config = " << to_json(c).dump() << '\n';
}

inline void write_csv(std::ostream& out, const sweep::Table& t) {
  write_config_header(out, t.config);
  out << "# grid_spacing = " << format_number(t.grid.spacing) << '\n';
  out << "# grid_shifted = " << (t.grid.shifted ? "true" : "false") << '\n';
  out << "alpha";
  for (const auto& c : t.columns) out << ',' << c.name;
  out << '\n';
  for (std::size_t i = 0; i < t.grid.alpha.size(); ++i) {
    out << format_number(t.grid.alpha[i]);
    for (const auto& c : t.columns) out << ',' << (c.is_label() ? c.labels[i] : format_number(c.values[i]));
    out << '\n';
  }
}

inline Json to_json(const sweep::Table& t) {
  Json j;
  j["config"] = to_json(t.config);
  j["grid_spacing"] = json_number(t.grid.spacing);
  j["grid_shifted"] = t.grid.shifted;
  Json cols = Json::array({"alpha"});
  for (const auto& c : t.columns) cols.push_back(c.name);
  j["columns"] = cols;
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.grid.alpha.size(); ++i) {
    Json row;
    row["alpha"] = json_number(t.grid.alpha[i]);
    for (const auto& c : t.columns) row[c.name] = c.is_label() ? Json(c.labels[i]) : json_number(c.values[i]);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline void write_table(std::ostream& out, const sweep::Table& t, sweep::Format f) {
  if (f == sweep::Format::kCsv) write_csv(out, t);
  else out << to_json(t).dump(2) << '\n';
}

inline void write_regime_map(std::ostream& out, const sweep::RegimeMap& m, const sweep::SweepConfig& c,
                             sweep::Format f) {
  if (f == sweep::Format::kCsv) {
    write_config_header(out, c);
    out << "# transition line: alpha = s * delta0_over_lambda0\n";
    out << "delta0_over_lambda0,alpha,regime,alpha_transition\n";
    for (std::size_t i = 0; i < m.ratios.size(); ++i) {
      for (std::size_t k = 0; k < m.alphas.size(); ++k) {
        out << format_number(m.ratios[i]) << ',' << format_number(m.alphas[k]) << ','
            << to_string(m.labels[i][k]) << ',' << format_number(m.transition_alpha[i]) << '\n';
      }
    }
    return;
  }
  Json j;
  j["config"] = to_json(c);
  j["s"] = json_number(m.s);
  Json cells = Json::array();
  for (std::size_t i = 0; i < m.ratios.size(); ++i) {
    for (std::size_t k = 0; k < m.alphas.size(); ++k) {
      cells.push_back({{"delta0_over_lambda0", json_number(m.ratios[i])},
                       {"alpha", json_number(m.alphas[k])},
                       {"regime", to_string(m.labels[i][k])},
                       {"alpha_transition", json_number(m.transition_alpha[i])}});
    }
  }
  j["cells"] = std::move(cells);
  out << j.dump(2) << '\n';
}

inline void write_comparison(std::ostream& out, const std::vector<sweep::ComparisonRow>& rows,
                             const sweep::SweepConfig& c, const sweep::OracleKnobs& k, sweep::Format f) {
  if (f == sweep::Format::kCsv) {
    write_config_header(out, c);
    out << "# alpha = " << format_number(k.alpha) << '\n';
    out << "observable,analytic,oracle,abs_dev,rel_dev\n";
    for (const auto& r : rows) {
      out << r.observable << ',' << format_number(r.analytic) << ',' << format_number(r.oracle) << ','
          << format_number(r.abs_dev) << ',' << format_number(r.rel_dev) << '\n';
    }
    return;
  }
  Json j;
  j["config"] = to_json(c);
  j["alpha"] = json_number(k.alpha);
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"observable", r.observable},
                   {"analytic", json_number(r.analytic)},
                   {"oracle", json_number(r.oracle)},
                   {"abs_dev", json_number(r.abs_dev)},
                   {"rel_dev", json_number(r.rel_dev)}});
  }
  j["rows"] = std::move(arr);
  out << j.dump(2) << '\n';
}

inline void write_kink(std::ostream& out, const std::optional<sweep::KinkReport>& r, const std::string& column,
                       double threshold, const sweep::SweepConfig& c, sweep::Format f) {
  if (f == sweep::Format::kCsv) {
    write_config_header(out, c);
    out << "# column = " << column << ", threshold = " << format_number(threshold) << '\n';
    out << "found,location,strength,jump,order,grid_spacing\n";
    if (r) {
      out << "true," << format_number(r->location) << ',' << format_number(r->strength) << ','
          << format_number(r->jump) << ',' << r->order << ',' << format_number(r->grid_spacing) << '\n';
    } else {
      out << "false,nan,nan,nan,,nan\n";
    }
    return;
  }
  Json j;
  j["config"] = to_json(c);
  j["column"] = column;
  j["threshold"] = json_number(threshold);
  if (r) {
    j["kink"] = {{"location", json_number(r->location)},
                 {"strength", json_number(r->strength)},
                 {"jump", json_number(r->jump)},
                 {"order", r->order},
                 {"grid_spacing", json_number(r->grid_spacing)}};
  } else {
    j["kink"] = nullptr;
  }
  out << j.dump(2) << '\n';
}

}  // namespace dissipative::io
