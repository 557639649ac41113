#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dissipative/bath.hpp"
#include "dissipative/errors.hpp"
#include "dissipative/gaussian_models.hpp"
#include "dissipative/oracle.hpp"
#include "dissipative/spin_boson.hpp"
#include "dissipative/spin_state.hpp"

namespace dissipative::sweep {

enum class Model { kFreeParticle, kOscillator, kSpinBoson };
enum class Format { kCsv, kJson };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::kFreeParticle: return "free-particle";
    case Model::kOscillator: return "oscillator";
    case Model::kSpinBoson: return "spin-boson";
  }
  return "?";
}

inline Model parse_model(const std::string& name) {
  if (name == "free-particle") return Model::kFreeParticle;
  if (name == "oscillator") return Model::kOscillator;
  if (name == "spin-boson") return Model::kSpinBoson;
  throw ConfigError("model: unknown model '" + name + "' (free-particle|oscillator|spin-boson)");
}

inline const char* to_string(Format f) { return f == Format::kCsv ? "csv" : "json"; }

inline Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ConfigError("format: unknown format '" + name + "' (csv|json)");
}

// Column names
inline constexpr const char* kColS = "S";
inline constexpr const char* kColSExpansion = "S_expansion";
inline constexpr const char* kColNu = "nu";
inline constexpr const char* kColAL2 = "a_L2";
inline constexpr const char* kColSigmaX = "sigma_x";
inline constexpr const char* kColDeltaRen = "delta_ren";
inline constexpr const char* kColRegime = "regime";
inline constexpr const char* kColDS = "dS_dalpha";
inline constexpr const char* kColD2S = "d2S_dalpha2";

/// Parameters of an alpha sweep. The grid is the half-open interval
/// (alpha_min, alpha_max] with n_points equally spaced points, spacing
/// (alpha_max - alpha_min) / n_points. The regime map uses the closed interval
/// [alpha_min, alpha_max] instead, together with a logarithmic Delta0/L0 grid.
struct SweepConfig {
  Model model = Model::kOscillator;

  double alpha_min = 0.0;
  double alpha_max = 0.6;
  int n_points = 600;

  double omega0 = 1.0;  ///< oscillator frequency; reference frequency of the free particle
  double omega_c = 100.0;
  double delta0 = 0.01;
  double lambda0 = 1.0;
  double s = 1.0;
  double temperature = 0.0;
  double length = 100.0;
  int dim = 1;

  /// Requested columns besides alpha; empty selects the model default.
  std::vector<std::string> outputs;
  Format format = Format::kCsv;
  bool include_branch_points = false;

  double ratio_min = 1e-4;
  double ratio_max = 1.0;
  int ratio_points = 41;
};

inline std::vector<std::string> available_columns(Model m) {
  switch (m) {
    case Model::kFreeParticle: return {kColS, kColAL2, kColDS, kColD2S};
    case Model::kOscillator: return {kColS, kColSExpansion, kColNu, kColDS, kColD2S};
    case Model::kSpinBoson: return {kColS, kColSigmaX, kColDeltaRen, kColRegime, kColDS, kColD2S};
  }
  return {};
}

inline std::vector<std::string> resolved_outputs(const SweepConfig& cfg) {
  return cfg.outputs.empty() ? available_columns(cfg.model) : cfg.outputs;
}

inline void validate(const SweepConfig& cfg) {
  if (!std::isfinite(cfg.alpha_min) || !(cfg.alpha_min >= 0.0)) throw ConfigError("alpha_min: must be finite and >= 0");
  if (!std::isfinite(cfg.alpha_max) || !(cfg.alpha_max > cfg.alpha_min)) {
    throw ConfigError("alpha_max: must exceed alpha_min");
  }
  if (cfg.n_points < 3) throw ConfigError("n_points: need at least 3 grid points");
  const auto allowed = available_columns(cfg.model);
  for (const auto& col : cfg.outputs) {
    if (std::find(allowed.begin(), allowed.end(), col) == allowed.end()) {
      throw ConfigError("outputs: column '" + col + "' is not available for model " + to_string(cfg.model));
    }
  }
  switch (cfg.model) {
    case Model::kFreeParticle:
      if (!(cfg.omega0 > 0.0)) throw ConfigError("omega0: must be > 0");
      if (!(cfg.omega_c > 0.0)) throw ConfigError("omega_c: must be > 0");
      if (!(cfg.length > 0.0)) throw ConfigError("length: must be > 0");
      if (cfg.dim < 1 || cfg.dim > 3) throw ConfigError("dim: must be 1, 2 or 3");
      break;
    case Model::kOscillator:
      if (!(cfg.omega0 > 0.0)) throw ConfigError("omega0: must be > 0");
      if (!(cfg.omega_c > cfg.omega0)) throw ConfigError("omega_c: must exceed omega0");
      break;
    case Model::kSpinBoson:
      if (!(cfg.lambda0 > 0.0)) throw ConfigError("lambda0: must be > 0");
      if (!(cfg.delta0 > 0.0) || !(cfg.delta0 < cfg.lambda0)) throw ConfigError("delta0: must lie in (0, lambda0)");
      if (!(cfg.s > 0.0)) throw ConfigError("s: must be > 0");
      if (cfg.temperature != 0.0) throw ConfigError("temperature: spin-boson sweeps are ground-state (T = 0) only");
      break;
  }
  if (!(cfg.temperature >= 0.0)) throw ConfigError("temperature: must be >= 0");
}

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

/// Couplings at which the closed forms of a model switch branch.
inline std::vector<double> branch_points(Model m) {
  switch (m) {
    case Model::kOscillator: return {kCriticalDampingAlpha};
    case Model::kSpinBoson: return {0.5, 1.0};
    case Model::kFreeParticle: return {};
  }
  return {};
}

struct Grid {
  std::vector<double> alpha;
  double spacing;
  bool shifted;  ///< grid moved down by spacing/2 to avoid a branch point
};

/// alpha_i = alpha_min + i h, i = 1..n. If a point lands on a branch value
/// (within 1e-9 h) and branch points are not requested, the whole grid moves
/// down by h/2, which keeps it uniform and inside (alpha_min, alpha_max].
inline Grid make_grid(const SweepConfig& cfg) {
  validate(cfg);
  const int n = cfg.n_points;
  const double h = (cfg.alpha_max - cfg.alpha_min) / n;
  auto build = [&](double offset) {
    std::vector<double> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = cfg.alpha_min + (i + 1 - offset) * h;
    return a;
  };
  Grid grid{build(0.0), h, false};
  if (cfg.include_branch_points) return grid;
  for (double b : branch_points(cfg.model)) {
    for (double a : grid.alpha) {
      if (std::abs(a - b) <= 1e-9 * h) {
        grid.alpha = build(0.5);
        grid.shifted = true;
        return grid;
      }
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

struct Column {
  std::string name;
  std::vector<double> values;       ///< numeric columns
  std::vector<std::string> labels;  ///< label columns (regime)

  bool is_label() const { return !labels.empty(); }
};

struct Table {
  SweepConfig config;
  Grid grid;
  std::vector<Column> columns;  ///< excludes alpha

  const Column& column(const std::string& name) const {
    for (const auto& c : columns) {
      if (c.name == name) return c;
    }
    throw ConfigError("column: '" + name + "' not present in the table");
  }
};

/// Central differences on the grid itself; second-order one-sided stencils at
/// the ends.
inline std::vector<double> grid_first_derivative(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  return d;
}

inline std::vector<double> grid_second_derivative(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
  if (n >= 4) {
    d[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / (h * h);
    d[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / (h * h);
  } else {
    d[0] = d[1];
    d[n - 1] = d[n - 2];
  }
  return d;
}

/// Regime label of a spin-boson point. Sub-Ohmic baths use subohmic_regime;
/// otherwise the point is coherent while the max rule selects Delta_ren,
/// incoherent past that, and localised for the Ohmic bath at alpha >= 1.
inline std::string spin_boson_regime_label(const SpinBosonPoint& p) {
  if (p.bath.s < 1.0 && !p.bath.ohmic()) return to_string(subohmic_regime(p));
  if (p.bath.ohmic()) {
    if (p.bath.alpha < 0.5) return to_string(SubOhmicRegime::kDelocalizedCoherent);
    if (p.bath.alpha < 1.0) return to_string(SubOhmicRegime::kDelocalizedIncoherent);
    return to_string(SubOhmicRegime::kLocalized);
  }
  return sigma_x(p).branch == SigmaXBranch::kRenormalizedTunneling
             ? to_string(SubOhmicRegime::kDelocalizedCoherent)
             : to_string(SubOhmicRegime::kDelocalizedIncoherent);
}

inline SpinBosonPoint spin_boson_point(const SweepConfig& cfg, double alpha) {
  return {cfg.delta0, BathSpec{cfg.s, alpha, cfg.lambda0}, cfg.temperature, kDefaultScalingConstant};
}

/// Free particle at coupling alpha: eta = 2 pi alpha omega0, the same map as
/// for the oscillator.
inline FreeParticleParams free_particle_params(const SweepConfig& cfg, double alpha) {
  return {2.0 * std::numbers::pi * alpha * cfg.omega0, cfg.omega_c, cfg.length, cfg.dim};
}

/// Evaluates every requested column on the grid, in grid order. Points where
/// a closed form is outside its regime hold NaN.
inline Table run_sweep(const SweepConfig& cfg) {
  Table table{cfg, make_grid(cfg), {}};
  const auto& alpha = table.grid.alpha;
  const std::size_t n = alpha.size();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> s(n, nan);
  std::vector<double> aux1(n, nan);
  std::vector<double> aux2(n, nan);
  std::vector<std::string> labels(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double a = alpha[i];
    switch (cfg.model) {
      case Model::kFreeParticle: {
        const auto r = free_particle_entropy(free_particle_params(cfg, a));
        s[i] = r.entropy;
        aux1[i] = r.a_l2;
        break;
      }
      case Model::kOscillator: {
        try {
          const auto m = oscillator_moments(OscillatorParams::from_alpha(a, cfg.omega0, cfg.omega_c));
          s[i] = oracle::gaussian_entropy(std::max(m.nu(), 0.5));
          aux1[i] = m.eps() < 1.0 ? oscillator_entropy_expansion(m) : nan;
          aux2[i] = m.nu();
        } catch (const RegimeError&) {
        }
        break;
      }
      case Model::kSpinBoson: {
        const auto p = spin_boson_point(cfg, a);
        const double sx = sigma_x(p).value;
        s[i] = spin_entropy(sx);
        aux1[i] = sx;
        aux2[i] = delta_ren(p).value_or(nan);
        labels[i] = spin_boson_regime_label(p);
        break;
      }
    }
  }

  const double h = table.grid.spacing;
  for (const auto& name : resolved_outputs(cfg)) {
    Column col{name, {}, {}};
    if (name == kColS) col.values = s;
    else if (name == kColDS) col.values = grid_first_derivative(s, h);
    else if (name == kColD2S) col.values = grid_second_derivative(s, h);
    else if (name == kColAL2 || name == kColSExpansion || name == kColSigmaX) col.values = aux1;
    else if (name == kColNu || name == kColDeltaRen) col.values = aux2;
    else if (name == kColRegime) col.labels = labels;
    table.columns.push_back(std::move(col));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Kink detection
// ---------------------------------------------------------------------------

struct KinkReport {
  double location;      ///< alpha at the flagged grid point
  std::size_t index;    ///< grid index of the flagged point
  double strength;      ///< |second difference| / background (dimensionless)
  double jump;          ///< estimated jump of the derivative, |second difference| / h
  int order;            ///< order (in alpha) of the derivative of the column that jumps
  double grid_spacing;
};

inline constexpr std::size_t kKinkMinPoints = 50;
inline constexpr std::size_t kKinkExclusion = 2;

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace detail

/// Flags the grid point where the second difference of `values` is largest,
/// provided it exceeds threshold times the median absolute second difference
/// over the rest of the grid (points within two cells excluded) and the
/// rounding floor 64 eps max|value|. order is 0 when the column itself jumps
/// there (first differences spike too), 1 when only its slope does.
inline std::optional<KinkReport> detect_kink(const std::vector<double>& alpha, const std::vector<double>& values,
                                             double threshold) {
  const std::size_t n = alpha.size();
  if (values.size() != n) throw ConfigError("detect_kink: column and grid lengths differ");
  if (n < kKinkMinPoints) throw ConfigError("detect_kink: need at least 50 grid points");
  if (!(threshold > 0.0)) throw ConfigError("threshold: must be > 0");
  const double h = (alpha.back() - alpha.front()) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw ConfigError("detect_kink: grid must be increasing");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(alpha[i + 1] - alpha[i] - h) > 1e-6 * h) throw ConfigError("detect_kink: grid is not uniform");
  }

  double scale = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  }
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

  std::vector<double> d2(n, 0.0);
  std::size_t peak = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = std::abs(values[i + 1] - 2.0 * values[i] + values[i - 1]);
    d2[i] = std::isfinite(v) ? v : 0.0;
    if (d2[i] > d2[peak]) peak = i;
  }
  if (peak == 0 || !(d2[peak] > floor)) return std::nullopt;

  auto background = [&](const std::vector<double>& d, std::size_t first, std::size_t last) {
    std::vector<double> rest;
    for (std::size_t i = first; i < last; ++i) {
      const std::size_t dist = i > peak ? i - peak : peak - i;
      if (dist > kKinkExclusion) rest.push_back(d[i]);
    }
    return detail::median(std::move(rest));
  };

  const double bg = std::max(background(d2, 1, n - 1), floor);
  const double strength = d2[peak] / bg;
  if (!(strength > threshold)) return std::nullopt;

  std::vector<double> d1(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double v = std::abs(values[i + 1] - values[i]);
    d1[i] = std::isfinite(v) ? v : 0.0;
  }
  const double d1_peak = std::max(d1[peak - 1], d1[peak]);
  const double d1_bg = std::max(background(d1, 0, n - 1), floor);
  const int order = d1_peak / d1_bg > threshold ? 0 : 1;

  return KinkReport{alpha[peak], peak, strength, d2[peak] / h, order, h};
}

/// Order offset of a column: a kink in dS_dalpha is a jump in S''.
inline int column_derivative_order(const std::string& column) {
  if (column == kColDS) return 1;
  if (column == kColD2S) return 2;
  return 0;
}

inline std::optional<KinkReport> detect_kink(const Table& table, const std::string& column, double threshold) {
  const Column& col = table.column(column);
  if (col.is_label()) throw ConfigError("column: '" + column + "' is not numeric");
  auto report = detect_kink(table.grid.alpha, col.values, threshold);
  if (report) report->order += column_derivative_order(column);
  return report;
}

// ---------------------------------------------------------------------------
// Sub-Ohmic regime map
// ---------------------------------------------------------------------------

struct RegimeMap {
  double s;
  std::vector<double> ratios;  ///< Delta0 / L0, logarithmic
  std::vector<double> alphas;  ///< linear, endpoints included
  /// labels[i][j] for ratios[i], alphas[j]
  std::vector<std::vector<SubOhmicRegime>> labels;
  /// analytic transition line alpha = s Delta0/L0 per ratio
  std::vector<double> transition_alpha;
};

/// Classifies every (Delta0/L0, alpha) cell with subohmic_regime. For
/// s = 0.8, L0/Delta0 = 10 the localisation transition is expected near
/// alpha ~ 0.2.
inline RegimeMap regime_map(double s, const std::vector<double>& ratios, const std::vector<double>& alphas) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("s: regime map requires 0 < s < 1");
  RegimeMap map{s, ratios, alphas, {}, {}};
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("ratio: Delta0/L0 must lie in (0, 1)");
    std::vector<SubOhmicRegime> row;
    row.reserve(alphas.size());
    for (double a : alphas) {
      const SpinBosonPoint p{r, BathSpec{s, a, 1.0}, 0.0, kDefaultScalingConstant};
      row.push_back(subohmic_regime(p));
    }
    map.labels.push_back(std::move(row));
    map.transition_alpha.push_back(s * r);
  }
  return map;
}

/// Log-spaced Delta0/L0 grid and closed linear alpha grid from a config.
inline RegimeMap regime_map(const SweepConfig& cfg) {
  if (!(cfg.ratio_min > 0.0) || !(cfg.ratio_max > cfg.ratio_min) || !(cfg.ratio_max < 1.0 + 1e-15)) {
    throw ConfigError("ratio_min/ratio_max: need 0 < ratio_min < ratio_max <= 1");
  }
  if (cfg.ratio_points < 2) throw ConfigError("ratio_points: need at least 2");
  if (cfg.n_points < 2) throw ConfigError("n_points: need at least 2");
  if (!(cfg.alpha_min >= 0.0) || !(cfg.alpha_max > cfg.alpha_min)) throw ConfigError("alpha_max: must exceed alpha_min");
  std::vector<double> ratios;
  const double l0 = std::log(cfg.ratio_min);
  const double l1 = std::log(cfg.ratio_max);
  for (int i = 0; i < cfg.ratio_points; ++i) {
    // the top column stays just below Delta0 = L0
    const double r = std::exp(l0 + (l1 - l0) * i / (cfg.ratio_points - 1));
    ratios.push_back(std::min(r, 1.0 - 1e-9));
  }
  std::vector<double> alphas;
  for (int j = 0; j < cfg.n_points; ++j) {
    alphas.push_back(cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * j / (cfg.n_points - 1));
  }
  return regime_map(cfg.s, ratios, alphas);
}

// ---------------------------------------------------------------------------
// Oracle comparison
// ---------------------------------------------------------------------------

struct ComparisonRow {
  std::string observable;
  double analytic;
  double oracle;
  double abs_dev;
  double rel_dev;
};

struct OracleKnobs {
  double alpha = 0.5 / std::numbers::pi;
  std::size_t n_modes = 400;
  oracle::Discretization scheme = oracle::Discretization::kLogarithmic;
  std::size_t ed_modes = 2;
  std::size_t fock_cut = 8;
  std::optional<double> sigma_x;  ///< spin-boson: evaluate the spin entropy at this <sigma_x>
};

inline ComparisonRow compare(std::string name, double analytic, double oracle_value) {
  const double d = std::abs(analytic - oracle_value);
  const double rel = analytic != 0.0 ? d / std::abs(analytic) : d;
  return {std::move(name), analytic, oracle_value, d, rel};
}

/// Entropy of rho = (1/2)[[1, sx], [sx, 1]] from its numerical eigenvalues.
inline double spin_entropy_eigen(double sx) {
  Eigen::Matrix2d rho;
  rho << 0.5, 0.5 * sx, 0.5 * sx, 0.5;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

/// Closed forms against the brute-force oracles at one coupling.
inline std::vector<ComparisonRow> oracle_run(const SweepConfig& cfg, const OracleKnobs& knobs) {
  std::vector<ComparisonRow> rows;
  switch (cfg.model) {
    case Model::kOscillator: {
      const auto p = OscillatorParams::from_alpha(knobs.alpha, cfg.omega0, cfg.omega_c);
      const auto m = oscillator_moments(p);
      const auto o = oracle::discrete_bath_moments(p, knobs.n_modes, knobs.scheme);
      rows.push_back(compare("q2", m.q2, o.q2));
      rows.push_back(compare("p2", m.p2, o.p2));
      rows.push_back(compare("nu", m.nu(), o.nu));
      rows.push_back(compare("S", oracle::gaussian_entropy(m.nu()), oracle::gaussian_entropy(std::max(o.nu, 0.5))));
      break;
    }
    case Model::kFreeParticle: {
      const auto fp = free_particle_params(cfg, knobs.alpha);
      const auto closed = free_particle_entropy(fp);
      const double a = closed.a_l2 / (cfg.length * cfg.length);
      const auto ring = oracle::ring_kernel_entropy(a, cfg.length, oracle::ring_required_modes(a, cfg.length));
      rows.push_back(compare("S", closed.entropy, cfg.dim * ring.entropy));
      rows.push_back(compare("trace", 1.0, ring.trace));
      break;
    }
    case Model::kSpinBoson: {
      const auto p = spin_boson_point(cfg, knobs.alpha);
      const double sx = knobs.sigma_x.value_or(sigma_x(p).value);
      rows.push_back(compare("S_spin", spin_entropy(sx), spin_entropy_eigen(sx)));
      if (!knobs.sigma_x) {
        const auto bath = oracle::discretize_spin_bath(p.bath, knobs.ed_modes, oracle::Discretization::kLogarithmic,
                                                       0.1 * p.delta0);
        oracle::EdOptions opt;
        opt.fock_cut = knobs.fock_cut;
        opt.validate_truncation = false;
        const auto ed = oracle::spin_boson_ed(p.delta0, bath, opt);
        rows.push_back(compare("sigma_x_ed", sx, ed.state.sx));
        rows.push_back(compare("S_ed", spin_entropy(sx), ed.state.entropy));
      }
      break;
    }
  }
  return rows;
}

}  // namespace dissipative::sweep
