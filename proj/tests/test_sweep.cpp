#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dissipative/io.hpp"
#include "dissipative/sweep.hpp"

using namespace dissipative;
using namespace dissipative::sweep;

namespace {

SweepConfig spin_boson_config() {
  SweepConfig c;
  c.model = Model::kSpinBoson;
  c.alpha_min = 0.0;
  c.alpha_max = 1.2;
  c.n_points = 120;
  c.delta0 = 0.01;
  c.lambda0 = 1.0;
  return c;
}

}  // namespace

TEST(Grid, HalfOpenUniform) {
  SweepConfig c;
  c.alpha_min = 0.0;
  c.alpha_max = 0.6;
  c.n_points = 600;
  const auto g = make_grid(c);
  ASSERT_EQ(g.alpha.size(), 600u);
  EXPECT_NEAR(g.spacing, 1e-3, 1e-15);
  EXPECT_NEAR(g.alpha.front(), 1e-3, 1e-15);
  EXPECT_NEAR(g.alpha.back(), 0.6, 1e-15);
  EXPECT_FALSE(g.shifted);
}

TEST(Grid, BranchPointsAreAvoided) {
  auto c = spin_boson_config();
  const auto g = make_grid(c);
  EXPECT_TRUE(g.shifted);
  for (double a : g.alpha) {
    EXPECT_GT(std::abs(a - 0.5), 0.4 * g.spacing);
    EXPECT_GT(std::abs(a - 1.0), 0.4 * g.spacing);
  }
  c.include_branch_points = true;
  EXPECT_FALSE(make_grid(c).shifted);
}

TEST(Config, Validation) {
  SweepConfig c;
  c.n_points = 2;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.alpha_max = c.alpha_min;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.outputs = {kColSigmaX};
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("outputs"), std::string::npos);
  }
  c = spin_boson_config();
  c.delta0 = 2.0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  auto c = spin_boson_config();
  c.s = 0.7;
  c.outputs = {kColS, kColRegime};
  c.format = Format::kJson;
  const auto back = io::config_from_json(io::to_json(c));
  EXPECT_EQ(io::to_json(back).dump(), io::to_json(c).dump());
}

TEST(Config, UnknownFieldNamed) {
  const auto j = io::parse_json(R"({"fixed": {"omega00": 1}})", "test");
  try {
    io::config_from_json(j);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("omega00"), std::string::npos);
  }
}

TEST(GridDerivatives, ExactForQuadratics) {
  std::vector<double> y;
  const double h = 0.1;
  for (int i = 0; i < 10; ++i) y.push_back(3.0 * (i * h) * (i * h) - (i * h));
  const auto d1 = grid_first_derivative(y, h);
  const auto d2 = grid_second_derivative(y, h);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(d1[i], 6.0 * i * h - 1.0, 1e-12);
    EXPECT_NEAR(d2[i], 6.0, 1e-9);
  }
}

TEST(RunSweep, OscillatorEntropyIncreasing) {
  SweepConfig c;
  c.n_points = 120;
  const auto t = run_sweep(c);
  const auto& s = t.column(kColS).values;
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s[i], s[i - 1]);
}

TEST(RunSweep, SpinBosonSaturatesNearLn2) {
  const auto t = run_sweep(spin_boson_config());
  const auto& s = t.column(kColS).values;
  EXPECT_GT(s.back(), 0.95 * std::log(2.0));
  EXPECT_LT(s.front(), 0.1);
  EXPECT_EQ(t.column(kColRegime).labels.back(), "Localized");
}

TEST(RunSweep, DerivativeColumnsComeFromTheTable) {
  SweepConfig c;
  c.n_points = 60;
  const auto t = run_sweep(c);
  const auto& s = t.column(kColS).values;
  const auto& ds = t.column(kColDS).values;
  const double h = t.grid.spacing;
  EXPECT_DOUBLE_EQ(ds[10], (s[11] - s[9]) / (2 * h));
}

TEST(RunSweep, RejectsZeroLengthGrid) {
  SweepConfig c;
  c.n_points = 0;
  EXPECT_THROW(run_sweep(c), ConfigError);
}

TEST(DetectKink, LinearColumnHasNone) {
  std::vector<double> a, v;
  for (int i = 0; i < 200; ++i) {
    a.push_back(0.01 * i);
    v.push_back(3.0 * 0.01 * i + 1.0);
  }
  EXPECT_FALSE(detect_kink(a, v, 5.0).has_value());
}

TEST(DetectKink, FindsSlopeJump) {
  std::vector<double> a, v;
  const double h = 1e-3;
  for (int i = 0; i < 600; ++i) {
    const double x = (i + 1) * h;
    a.push_back(x);
    v.push_back(std::sin(x) + (x > 0.3183 ? 0.5 * (x - 0.3183) : 0.0));
  }
  const auto r = detect_kink(a, v, 5.0);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->location, 0.3183, h);
  EXPECT_EQ(r->order, 1);
  EXPECT_GT(r->strength, 5.0);
  EXPECT_NEAR(r->jump, 0.5, 0.3);
}

TEST(DetectKink, FindsValueJump) {
  std::vector<double> a, v;
  for (int i = 0; i < 100; ++i) {
    a.push_back(i * 0.01);
    v.push_back(i < 50 ? std::cos(i * 0.01) : std::cos(i * 0.01) + 1.0);
  }
  const auto r = detect_kink(a, v, 5.0);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->order, 0);
}

TEST(DetectKink, Preconditions) {
  std::vector<double> a(40), v(40);
  EXPECT_THROW(detect_kink(a, v, 5.0), ConfigError);
  a.resize(60);
  v.resize(60);
  for (int i = 0; i < 60; ++i) a[i] = i * i * 0.001;
  EXPECT_THROW(detect_kink(a, v, 5.0), ConfigError);
}

TEST(RegimeMap, LineAndLimits) {
  const std::vector<double> ratios{1e-4, 1e-3, 1e-2, 0.5, 0.99};
  std::vector<double> alphas;
  for (int j = 0; j <= 50; ++j) alphas.push_back(0.01 * j);
  const auto m = regime_map(0.5, ratios, alphas);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    EXPECT_NE(m.labels[i][0], SubOhmicRegime::kLocalized);  // alpha = 0 row
    EXPECT_DOUBLE_EQ(m.transition_alpha[i], 0.5 * ratios[i]);
  }
  // the line separates localised from delocalised cells at small ratio
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    const bool above = alphas[j] > m.transition_alpha[0];
    EXPECT_EQ(m.labels[0][j] == SubOhmicRegime::kLocalized, above) << "alpha=" << alphas[j];
  }
  int coherent = 0;
  for (auto l : m.labels.back()) coherent += l == SubOhmicRegime::kDelocalizedCoherent;
  EXPECT_GT(coherent, static_cast<int>(alphas.size()) / 2);
  EXPECT_THROW(regime_map(1.0, ratios, alphas), ConfigError);
}

TEST(OracleRun, Oscillator) {
  SweepConfig c;
  OracleKnobs k;
  k.alpha = 0.5 / std::numbers::pi;
  const auto rows = oracle_run(c, k);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_LT(rows[0].rel_dev, 0.01);
  EXPECT_LT(rows[1].rel_dev, 0.02);
}

TEST(OracleRun, SpinEntropyEigenvalues) {
  auto c = spin_boson_config();
  OracleKnobs k;
  k.sigma_x = 0.5;
  const auto rows = oracle_run(c, k);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LT(rows[0].abs_dev, 1e-12);
}

TEST(OracleRun, FreeParticle) {
  SweepConfig c;
  c.model = Model::kFreeParticle;
  c.length = 100.0;
  OracleKnobs k;
  k.alpha = 0.1;
  const auto rows = oracle_run(c, k);
  EXPECT_LT(rows[0].rel_dev, 0.01);
  EXPECT_NEAR(rows[1].oracle, 1.0, 1e-10);
}

TEST(Output, CsvAndJsonCarryTheSameNumbers) {
  auto c = spin_boson_config();
  c.outputs = {kColS, kColSigmaX};
  const auto t = run_sweep(c);
  std::ostringstream csv;
  io::write_csv(csv, t);
  const auto j = io::to_json(t);
  std::istringstream in(csv.str());
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("alpha", 0) == 0) continue;
    std::istringstream fields(line);
    std::string a, s, sx;
    std::getline(fields, a, ',');
    std::getline(fields, s, ',');
    std::getline(fields, sx, ',');
    EXPECT_EQ(std::stod(a), j["rows"][row]["alpha"].get<double>());
    EXPECT_EQ(std::stod(s), j["rows"][row]["S"].get<double>());
    EXPECT_EQ(std::stod(sx), j["rows"][row]["sigma_x"].get<double>());
    ++row;
  }
  EXPECT_EQ(row, t.grid.alpha.size());
  EXPECT_EQ(csv.str().find('\r'), std::string::npos);
}

TEST(Output, NumberFormat) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(std::nan("")), "nan");
  EXPECT_TRUE(io::json_number(std::nan("")).is_null());
}

TEST(Output, Deterministic) {
  const auto c = spin_boson_config();
  std::ostringstream a, b;
  io::write_csv(a, run_sweep(c));
  io::write_csv(b, run_sweep(c));
  EXPECT_EQ(a.str(), b.str());
}
