#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dissipative/gaussian_models.hpp"
#include "dissipative/oracle.hpp"
#include "dissipative/spin_state.hpp"

using namespace dissipative;
using namespace dissipative::oracle;

TEST(GaussianEntropy, Values) {
  EXPECT_EQ(gaussian_entropy(0.5), 0.0);
  EXPECT_NEAR(gaussian_entropy(1.0), 0.954771252442219228, 1e-15);
  EXPECT_NEAR(gaussian_entropy(10.0), 3.30216811345481178, 1e-14);
  EXPECT_THROW(gaussian_entropy(0.4), DomainError);
}

TEST(GaussianEntropy, LargeNuAsymptote) {
  for (double nu : {1e3, 1e6, 1e9}) EXPECT_NEAR(gaussian_entropy(nu), std::log(nu) + 1.0, 1.0 / (20.0 * nu * nu) + 1e-14 * std::log(nu));
}

TEST(GaussianEntropy, Increasing) {
  double prev = 0.0;
  for (double nu = 0.51; nu < 20.0; nu += 0.1) {
    const double s = gaussian_entropy(nu);
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(DiscreteBath, SpectralWeightIsConserved) {
  const OscillatorParams p{1.0, 1.0, 100.0};
  for (auto scheme : {Discretization::kLinear, Discretization::kLogarithmic}) {
    const auto bath = discretize_ohmic_bath(p, 64, scheme, 1e-3);
    double total = 0.0;
    for (const auto& m : bath.modes) total += 0.5 * std::numbers::pi * m.lambda * m.lambda / m.omega;
    EXPECT_NEAR(total, 0.5 * (100.0 * 100.0 - 1e-6), 1e-8 * 5000.0);
  }
}

TEST(DiscreteBath, UncoupledOscillator) {
  const auto r = discrete_bath_moments({1.0, 0.0, 100.0}, 16);
  EXPECT_NEAR(r.q2, 0.5, 1e-13);
  EXPECT_NEAR(r.p2, 0.5, 1e-13);
}

TEST(DiscreteBath, SelfConvergence) {
  // refinement moves the result less and less
  const OscillatorParams p{1.0, 1.0, 100.0};
  const double a = discrete_bath_moments(p, 100).q2;
  const double b = discrete_bath_moments(p, 200).q2;
  const double c = discrete_bath_moments(p, 400).q2;
  EXPECT_LT(std::abs(c - b), std::abs(b - a));
  EXPECT_LT(std::abs(c - b), 1e-3 * c);
}

TEST(DiscreteBath, ApproachesClosedFormForLargeCutoff) {
  // The closed form neglects corrections of order kappa omega0 / omega_c.
  auto deviation = [](double omega_c) {
    const OscillatorParams p{1.0, 1.0, omega_c};
    const auto m = oscillator_moments(p);
    const auto o = discrete_bath_moments(p, 800, Discretization::kLogarithmic, 1e-2);
    return std::abs(o.p2 / m.p2 - 1.0);
  };
  const double near = deviation(1e2);
  const double far = deviation(1e4);
  EXPECT_LT(far, 0.5 * near);
  EXPECT_LT(far, 3e-3);
}

TEST(DiscreteBath, Rejects) {
  EXPECT_THROW(discrete_bath_moments({1.0, 1.0, 100.0}, 4), ConfigError);
}

TEST(RingKernel, MatchesFreeParticleEntropy) {
  const double length = 10.0;
  const double a = 100.0;  // a L^2 = 1e4
  const auto r = ring_kernel_entropy(a, length, ring_required_modes(a, length));
  const double closed = 0.5 * (std::log(a * length * length) + 1.0 - std::log(std::numbers::pi));
  EXPECT_NEAR(r.entropy, closed, 1e-6);
  EXPECT_NEAR(r.trace, 1.0, 1e-10);
}

TEST(RingKernel, TruncationIsDetected) {
  EXPECT_THROW(ring_kernel_entropy(100.0, 10.0, 3), NumericalError);
}

TEST(TracePower, RoutesAgreeAtNOne) {
  const GaussianKernel k{10.0, 0.1};
  const auto t = trace_power(k, 1);
  EXPECT_NEAR(t.determinant, 1.0, 1e-14);
  EXPECT_NEAR(t.symplectic, 1.0, 1e-14);
  const double e = std::sqrt(0.04);
  EXPECT_NEAR(t.expansion, std::sqrt(1 - e) / std::sqrt(1 - e * e / 4), 1e-14);
}

TEST(TracePower, DeterminantEqualsSymplectic) {
  for (int n = 1; n <= 6; ++n) {
    for (double ratio : {1.5, 4.0, 100.0, 1e4}) {
      const GaussianKernel k{ratio, 1.0};
      const auto t = trace_power(k, n);
      EXPECT_NEAR(t.determinant, t.symplectic, 1e-12 * t.symplectic) << "n=" << n << " a/b=" << ratio;
    }
  }
}

TEST(TracePower, ExpansionIsFirstOrderInEps) {
  for (int n : {2, 3}) {
    const double d1 = std::abs(trace_power({1e4, 1.0}, n).expansion / trace_power({1e4, 1.0}, n).symplectic - 1);
    const double d2 = std::abs(trace_power({4e4, 1.0}, n).expansion / trace_power({4e4, 1.0}, n).symplectic - 1);
    EXPECT_NEAR(d1 / d2, 2.0, 0.1) << "n=" << n;
  }
}

TEST(TracePower, RejectsBadKernel) {
  EXPECT_THROW(trace_power({1.0, 2.0}, 2), DomainError);
  EXPECT_THROW(trace_power({4.0, 1.0}, 0), DomainError);
}

TEST(ExpansionSpectrum, EntropyTendsToExpansionFormula) {
  const double e = 1e-3;
  const auto g = expansion_spectrum_entropy(e);
  const MomentPair m{1.0 / e, 1.0 / e};
  EXPECT_NEAR(g.entropy, oscillator_entropy_expansion(m), 2e-2);
  EXPECT_NEAR(g.trace, 1.0, 2e-3);
}

namespace {

DiscreteBath two_modes(double scale) {
  return DiscreteBath{{{0.5, 0.3 * scale}, {1.5, 0.5 * scale}}, Discretization::kLogarithmic};
}

}  // namespace

TEST(SpinBosonEd, FreeSpin) {
  const auto r = spin_boson_ed(1.0, two_modes(0.0), {});
  EXPECT_NEAR(r.state.sx, 1.0, 1e-12);
  EXPECT_NEAR(r.state.entropy, 0.0, 1e-10);
  EXPECT_NEAR(r.ground_energy, -0.5, 1e-12);
}

TEST(SpinBosonEd, SingleModeAgainstDenseReference) {
  // one mode, weak coupling: second-order perturbation theory for the energy
  const double g = 0.05;
  const DiscreteBath bath{{{2.0, g}}, Discretization::kLinear};
  const auto r = spin_boson_ed(1.0, bath, {});
  // E = -1/2 - (g/2)^2 / (w + delta0)
  EXPECT_NEAR(r.ground_energy, -0.5 - 0.25 * g * g / 3.0, 1e-6);
}

TEST(SpinBosonEd, ReducedStateIsPhysical) {
  const auto r = spin_boson_ed(1.0, two_modes(1.0), {});
  EXPECT_NEAR(r.trace, 1.0, 1e-12);
  EXPECT_GE(r.rho_eigenvalues[0], -1e-12);
  EXPECT_NEAR(r.state.sz, 0.0, 1e-10);
  EXPECT_NEAR(r.state.entropy, spin_entropy(r.state.sx), 1e-10);
}

TEST(SpinBosonEd, LanczosMatchesDense) {
  EdOptions dense;
  dense.validate_truncation = false;
  dense.fock_cut = 6;
  EdOptions sparse = dense;
  sparse.dense_limit = 0;
  const auto bath = two_modes(0.8);
  const auto a = spin_boson_ed(1.0, bath, dense);
  const auto b = spin_boson_ed(1.0, bath, sparse);
  EXPECT_NEAR(a.ground_energy, b.ground_energy, 1e-10);
  EXPECT_NEAR(a.state.sx, b.state.sx, 1e-8);
}

TEST(SpinBosonEd, Limits) {
  EdOptions o;
  o.fock_cut = 9;
  EXPECT_THROW(spin_boson_ed(1.0, two_modes(1.0), o), ConfigError);
  EXPECT_THROW(spin_boson_ed(1.0, DiscreteBath{}, {}), ConfigError);
}
