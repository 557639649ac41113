#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "dissipative/bath.hpp"
#include "dissipative/errors.hpp"
#include "dissipative/numerics.hpp"
#include "dissipative/spin_state.hpp"

namespace dissipative {

/// Numerical constant C of the Ohmic ground-state energy. With C = 1 the
/// closed form coincides with the flow integral F = int (Delta(L)/L)^2 dL for
/// every alpha < 1.
inline constexpr double kDefaultScalingConstant = 1.0;

/// Tolerance for "alpha is exactly 1/2" in the Ohmic energy.
inline constexpr double kHalfBranchWidth = 1e-9;

/// For s < 1, Delta_ren is sought in (kDeltaRenFloor * cutoff, cutoff]; no
/// root there means no solution. For s >= 1 the root is unique and always
/// exists for alpha < 1 (Ohmic) or any alpha (super-Ohmic), so only the
/// smallest normal double bounds the search.
inline constexpr double kDeltaRenFloor = 1e-15;

/// Below this Delta0/cutoff a sub-Ohmic point with alpha < s Delta0/cutoff is
/// treated as being in the scaling regime of the one-loop flow.
inline constexpr double kScalingLimitRatio = 0.1;

struct SpinBosonPoint {
  double delta0;
  BathSpec bath;
  double temperature = 0.0;
  double scaling_constant = kDefaultScalingConstant;

  void validate() const {
    bath.validate();
    if (!(delta0 > 0.0)) throw DomainError("spin-boson: delta0 must be > 0");
    if (!(delta0 < bath.cutoff)) throw DomainError("spin-boson: delta0 must be below the cutoff");
    if (!(temperature >= 0.0)) throw DomainError("spin-boson: temperature must be >= 0");
    if (!(scaling_constant > 0.0)) throw DomainError("spin-boson: scaling constant C must be > 0");
  }

  /// Delta0 / Lambda0
  double ratio() const { return delta0 / bath.cutoff; }

  SpinBosonPoint with_alpha(double alpha) const {
    SpinBosonPoint p = *this;
    p.bath.alpha = alpha;
    return p;
  }
  SpinBosonPoint with_delta0(double d) const {
    SpinBosonPoint p = *this;
    p.delta0 = d;
    return p;
  }
};

// ---------------------------------------------------------------------------
// Renormalised tunnelling
// ---------------------------------------------------------------------------

namespace detail {

inline double delta_ren_log_floor(const SpinBosonPoint& p) {
  if (p.bath.s < 1.0 && !p.bath.ohmic()) return std::log(kDeltaRenFloor);
  return std::log(std::numeric_limits<double>::min() / p.bath.cutoff);
}

/// G(u) = u - ln(Delta0/L0) + phi(L0 e^u); zero at u = ln(Delta_ren/L0).
inline double delta_ren_residual(const SpinBosonPoint& p, double u) {
  return u - std::log(p.ratio()) + adiabatic_exponent(p.bath, p.bath.cutoff * std::exp(u));
}

inline std::optional<double> delta_ren_bracketed(const SpinBosonPoint& p) {
  const double u_floor = delta_ren_log_floor(p);
  constexpr int kPointsPerDecade = 40;
  const int steps = static_cast<int>(std::ceil(-u_floor / std::log(10.0) * kPointsPerDecade));
  double u_hi = 0.0;
  double g_hi = delta_ren_residual(p, u_hi);
  for (int i = 1; i <= steps; ++i) {
    const double u_lo = u_floor * static_cast<double>(i) / steps;
    const double g_lo = delta_ren_residual(p, u_lo);
    if (g_lo <= 0.0 && g_hi > 0.0) {
      if (g_lo == 0.0) return p.bath.cutoff * std::exp(u_lo);
      std::uintmax_t iterations = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(52);
      auto [a, b] = boost::math::tools::toms748_solve(
          [&](double u) { return delta_ren_residual(p, u); }, u_lo, u_hi, g_lo, g_hi, tol, iterations);
      if (iterations >= 200) throw NumericalError("delta_ren: bracketing solver did not converge");
      return p.bath.cutoff * std::exp(0.5 * (a + b));
    }
    u_hi = u_lo;
    g_hi = g_lo;
  }
  return std::nullopt;
}

}  // namespace detail

/// Self-consistent low-energy tunnelling, Delta = Delta0 exp(-phi(Delta)),
/// with phi the adiabatic exponent of the bath (factor 1/2 included).
///
/// Solved by damped fixed-point iteration (damping 0.5) in ln Delta, started
/// at Delta0. When the iteration leaves the bracket or stalls, a scan of the
/// residual on a log grid plus TOMS 748 takes over. Returns nullopt when
/// there is no root above the floor (sub-Ohmic: 1e-15 cutoff; Ohmic alpha >= 1).
/// Where several roots exist the largest, continuously connected to Delta0 at
/// alpha = 0, is returned.
inline std::optional<double> delta_ren(const SpinBosonPoint& p) {
  p.validate();
  if (p.bath.alpha == 0.0) return p.delta0;
  const double u_floor = detail::delta_ren_log_floor(p);
  const double log_ratio = std::log(p.ratio());
  double u = log_ratio;
  constexpr int kMaxIterations = 10000;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double target = log_ratio - adiabatic_exponent(p.bath, p.bath.cutoff * std::exp(u));
    const double next = 0.5 * u + 0.5 * target;
    if (!(next > u_floor)) break;
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u))) return p.bath.cutoff * std::exp(next);
    u = next;
  }
  return detail::delta_ren_bracketed(p);
}

// ---------------------------------------------------------------------------
// Ohmic closed forms
// ---------------------------------------------------------------------------

enum class OhmicBranch { kWeak, kHalf, kIntermediate, kLocalized };

inline OhmicBranch ohmic_branch(double alpha) {
  if (std::abs(alpha - 0.5) < kHalfBranchWidth) return OhmicBranch::kHalf;
  if (alpha < 0.5) return OhmicBranch::kWeak;
  if (alpha < 1.0) return OhmicBranch::kIntermediate;
  return OhmicBranch::kLocalized;
}

inline void require_ohmic(const SpinBosonPoint& p, const char* op) {
  if (!p.bath.ohmic()) throw ConfigError(std::string(op) + ": requires an Ohmic bath (s = 1)");
}

/// Ground-state energy of the Ohmic spin-boson model (x = Delta0/L0):
///
///   0 < a < 1/2 :  C/(1-2a) [Delta0 x^(a/(1-a)) - Delta0 x]
///   a = 1/2     :  2 C Delta0 x ln(1/x)
///   1/2 < a < 1 :  C/(2a-1) [Delta0 x - Delta0 x^(a/(1-a))]
///   a >= 1      :  C Delta0 x
///
/// The first and third lines are one analytic function; it is evaluated as
/// C Delta0 x expm1(q ln x)/(1 - 2a), q = (2a-1)/(1-a), which stays accurate
/// next to a = 1/2.
inline double ohmic_ground_energy(const SpinBosonPoint& p) {
  p.validate();
  require_ohmic(p, "ohmic_ground_energy");
  const double a = p.bath.alpha;
  const double c = p.scaling_constant;
  const double x = p.ratio();
  const double lx = std::log(x);
  switch (ohmic_branch(a)) {
    case OhmicBranch::kHalf:
      return -2.0 * c * p.delta0 * x * lx;
    case OhmicBranch::kLocalized:
      return c * p.delta0 * x;
    default: {
      const double q = (2.0 * a - 1.0) / (1.0 - a);
      return c * p.delta0 * x * std::expm1(q * lx) / (1.0 - 2.0 * a);
    }
  }
}

/// dE/dDelta0 of ohmic_ground_energy at fixed alpha, L0.
inline double ohmic_energy_slope(const SpinBosonPoint& p) {
  p.validate();
  require_ohmic(p, "ohmic_energy_slope");
  const double a = p.bath.alpha;
  const double c = p.scaling_constant;
  const double x = p.ratio();
  const double lx = std::log(x);
  switch (ohmic_branch(a)) {
    case OhmicBranch::kHalf:
      return -2.0 * c * x * (2.0 * lx + 1.0);
    case OhmicBranch::kLocalized:
      return 2.0 * c * x;
    default: {
      // (1+p) x^p - 2x = x [2 expm1(q ln x) + q x^q],  p = a/(1-a) = 1 + q
      const double q = (2.0 * a - 1.0) / (1.0 - a);
      return c * x * (2.0 * std::expm1(q * lx) + q * std::exp(q * lx)) / (1.0 - 2.0 * a);
    }
  }
}

// ---------------------------------------------------------------------------
// <sigma_x>
// ---------------------------------------------------------------------------

enum class SigmaXBranch {
  kOhmicClosedForm,
  kRenormalizedTunneling,  ///< max rule picks Delta_ren
  kPerturbative,           ///< max rule picks Delta0^2 / L0
};

struct SigmaX {
  /// |<sigma_x>| in [0, 1]. Normalised so that the free spin gives 1:
  /// dF/dDelta0 for the max rule, (1/C) dE/dDelta0 for the Ohmic energy.
  double value;
  /// 2 dE/dDelta0 (Ohmic) or 2 dF/dDelta0 (max rule) without normalisation.
  double raw;
  SigmaXBranch branch;
};

/// dDelta_ren/dDelta0 from implicit differentiation of
/// D = Delta0 exp(-phi(D)):  (D/Delta0) / (1 - alpha (D/L0)^(s-1)).
inline double delta_ren_slope(const SpinBosonPoint& p, double d) {
  const double fold = 1.0 - p.bath.alpha * std::pow(d / p.bath.cutoff, p.bath.s - 1.0);
  if (!(fold > 0.0)) return std::numeric_limits<double>::infinity();
  return (d / p.delta0) / fold;
}

/// Ground-state |<sigma_x>| at T = 0. Ohmic baths use the derivative of the
/// closed-form energy; other baths use F ~ max(Delta_ren, Delta0^2/L0) with
/// dDelta_ren/dDelta0 from the self-consistency. A missing Delta_ren selects
/// the perturbative branch, <sigma_x> ~ Delta0/L0.
inline SigmaX sigma_x(const SpinBosonPoint& p) {
  p.validate();
  if (p.temperature != 0.0) throw ConfigError("sigma_x: the ground-state expressions require T = 0");
  if (p.bath.ohmic()) {
    const double slope = ohmic_energy_slope(p);
    const double value = std::clamp(slope / p.scaling_constant, 0.0, 1.0);
    return {value, 2.0 * slope, SigmaXBranch::kOhmicClosedForm};
  }
  const double perturbative = p.delta0 * p.ratio();
  const auto d = delta_ren(p);
  if (d && *d > perturbative) {
    const double slope = delta_ren_slope(p, *d);
    return {std::clamp(slope, 0.0, 1.0), 2.0 * slope, SigmaXBranch::kRenormalizedTunneling};
  }
  const double slope = 2.0 * p.ratio();
  return {std::clamp(slope, 0.0, 1.0), 2.0 * slope, SigmaXBranch::kPerturbative};
}

inline ReducedSpinState spin_state(const SpinBosonPoint& p) { return make_spin_state(sigma_x(p).value); }

/// Coupling at which the max rule switches from Delta_ren to Delta0^2/L0, the
/// estimate of the coherent-incoherent crossover. Exactly 1/2 for the Ohmic
/// bath; about (s-1) ln(L0/Delta0) for super-Ohmic baths. nullopt if no
/// switch happens for alpha <= 1e3.
inline std::optional<double> coherence_crossover_alpha(const SpinBosonPoint& p) {
  p.validate();
  if (p.bath.ohmic()) return 0.5;
  auto coherent = [&](double alpha) {
    const auto d = delta_ren(p.with_alpha(alpha));
    return d && *d > p.delta0 * p.ratio();
  };
  double lo = 0.0;
  double hi = 1.0;
  while (coherent(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) return std::nullopt;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (coherent(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// d ln<sigma_x> / d alpha by Richardson-extrapolated central differences
/// with relative step 1e-4.
inline double log_sigma_x_alpha_derivative(const SpinBosonPoint& p) {
  auto ln_sx = [&](double a) { return std::log(sigma_x(p.with_alpha(a)).value); };
  return numerics::richardson_derivative(ln_sx, p.bath.alpha, numerics::relative_step(p.bath.alpha));
}

// ---------------------------------------------------------------------------
// Free-energy flow
// ---------------------------------------------------------------------------

/// State along a scaling trajectory from the bare cutoff down to `lambda`.
struct FlowState {
  double lambda;
  double delta;
  double kappa_tilde;
  double free_energy_accum;
  double sx_accum;
  /// Set when the accumulated <sigma_x> deficit diverges as lambda -> 0
  /// (incoherent: <sigma_x> << 1).
  bool incoherent = false;
};

/// Delta(L) = Delta0 exp(-phi(L)).
inline double running_tunneling(const SpinBosonPoint& p, double lambda) {
  if (!(lambda > 0.0)) return 0.0;
  return p.delta0 * std::exp(-adiabatic_exponent(p.bath, lambda));
}

namespace detail {

inline double flow_integral(const SpinBosonPoint& p, double lower) {
  const double l0 = p.bath.cutoff;
  // u = ln(L/L0):  int (Delta/L)^2 dL = int Delta(L)^2 / L du
  auto integrand = [&](double u) {
    const double lambda = l0 * std::exp(u);
    if (!(lambda > 0.0)) return 0.0;
    const double d = running_tunneling(p, lambda);
    return d * d / lambda;
  };
  const double u_lo = lower > 0.0 ? std::log(lower / l0) : -std::numeric_limits<double>::infinity();
  if (u_lo >= 0.0) return 0.0;
  return numerics::integrate(integrand, u_lo, 0.0, 1e-10).value;
}

}  // namespace detail

/// F = int_{lower}^{L0} (Delta(L)/L)^2 dL with lower = max(T, Delta_ren)
/// (Delta_ren = 0 when there is no self-consistent solution).
inline double flow_free_energy(const SpinBosonPoint& p) {
  p.validate();
  const auto d = delta_ren(p);
  const double lower = std::max(p.temperature, d.value_or(0.0));
  return detail::flow_integral(p, lower);
}

/// Partial free energy accumulated from L0 down to lambda (no Delta_ren stop).
inline FlowState free_energy_flow(const SpinBosonPoint& p, double lambda) {
  p.validate();
  if (!(lambda > 0.0) || lambda > p.bath.cutoff) throw DomainError("free_energy_flow: lambda must lie in (0, L0]");
  const double delta = running_tunneling(p, lambda);
  FlowState state{lambda, delta, p.bath.alpha * lambda / delta, detail::flow_integral(p, lambda), 0.0};
  return state;
}

struct FreeSpinSigmaX {
  double scaling;  ///< min(Delta0/T, 1)
  double exact;    ///< tanh(Delta0/T)
};

/// Free two-level system at temperature T: scaling estimate against the
/// exact thermal value.
inline FreeSpinSigmaX free_tls_sigma_x(double delta0, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("free_tls_sigma_x: T must be > 0");
  if (!(delta0 >= 0.0)) throw DomainError("free_tls_sigma_x: delta0 must be >= 0");
  const double r = delta0 / temperature;
  return {std::min(r, 1.0), std::tanh(r)};
}

// ---------------------------------------------------------------------------
// Sub-Ohmic one-loop flow
// ---------------------------------------------------------------------------

/// Beta function of kappa~ = alpha L / Delta:  beta = -s k + k^2, with
/// d kappa~ / d ln(L0/L) = beta.
inline double kappa_beta(double kappa, double s) { return -s * kappa + kappa * kappa; }

/// Closed-form solution of the one-loop flow (r = L/L0):
///   kappa~(r) = s k0 r^s / (k0 r^s + s - k0).
/// Reduces to k0 r^s for k0 << s; stationary at k0 = s.
inline double kappa_tilde_at(double kappa0, double s, double r) {
  const double rs = std::pow(r, s);
  return s * kappa0 * rs / (kappa0 * rs + s - kappa0);
}

/// Integrates the one-loop flow from L0 down to lambda_stop with Delta held at
/// Delta0. sx_accum is the <sigma_x> deficit int_L^L0 kappa~(L') Delta0 / L'^2 dL',
/// which grows as L^(s-1) and diverges for s <= 1.
inline FlowState subohmic_rg_flow(const SpinBosonPoint& p, double lambda_stop) {
  p.validate();
  const double s = p.bath.s;
  if (!(s < 1.0)) throw ConfigError("subohmic_rg_flow: requires s < 1");
  const double l0 = p.bath.cutoff;
  if (!(lambda_stop > 0.0) || lambda_stop > l0) throw DomainError("subohmic_rg_flow: lambda must lie in (0, L0]");
  double kappa0 = p.bath.alpha / p.ratio();
  if (std::abs(kappa0 - s) <= 1e-12 * s) kappa0 = s;
  if (kappa0 > s) {
    throw RegimeError("subohmic_rg_flow: kappa0 = " + std::to_string(kappa0) +
                      " exceeds s; the flow runs away (localised side)");
  }
  auto integrand = [&](double u) {
    const double lambda = l0 * std::exp(u);
    return kappa_tilde_at(kappa0, s, lambda / l0) * p.delta0 / lambda;
  };
  const double u_stop = std::log(lambda_stop / l0);
  const double deficit = u_stop < 0.0 ? numerics::integrate(integrand, u_stop, 0.0, 1e-11).value : 0.0;
  FlowState state{lambda_stop, p.delta0, kappa_tilde_at(kappa0, s, lambda_stop / l0), 0.0, deficit};
  state.incoherent = s <= 1.0 && kappa0 > 0.0;
  return state;
}

enum class SubOhmicRegime { kDelocalizedCoherent, kDelocalizedIncoherent, kLocalized };

inline const char* to_string(SubOhmicRegime r) {
  switch (r) {
    case SubOhmicRegime::kDelocalizedCoherent: return "DelocalizedCoherent";
    case SubOhmicRegime::kDelocalizedIncoherent: return "DelocalizedIncoherent";
    case SubOhmicRegime::kLocalized: return "Localized";
  }
  return "?";
}

/// Coupling of the continuous transition line, alpha = s Delta0 / L0.
inline double subohmic_transition_alpha(const SpinBosonPoint& p) { return p.bath.s * p.ratio(); }

/// Regime of a sub-Ohmic point:
///  - alpha = 0 is the free spin: DelocalizedCoherent;
///  - below the line alpha = s Delta0/L0 in the scaling regime
///    (Delta0/L0 < kScalingLimitRatio) the one-loop flow applies and the
///    deficit integral diverges: DelocalizedIncoherent;
///  - otherwise a self-consistent Delta_ren above Delta0^2/L0: DelocalizedCoherent;
///  - otherwise below the line: DelocalizedIncoherent, above it: Localized.
inline SubOhmicRegime subohmic_regime(const SpinBosonPoint& p) {
  p.validate();
  if (!(p.bath.s < 1.0)) throw ConfigError("subohmic_regime: requires s < 1");
  if (p.bath.alpha == 0.0) return SubOhmicRegime::kDelocalizedCoherent;
  const bool below_line = p.bath.alpha < subohmic_transition_alpha(p);
  if (below_line && p.ratio() < kScalingLimitRatio) return SubOhmicRegime::kDelocalizedIncoherent;
  const auto d = delta_ren(p);
  if (d && *d >= p.delta0 * p.ratio()) return SubOhmicRegime::kDelocalizedCoherent;
  return below_line ? SubOhmicRegime::kDelocalizedIncoherent : SubOhmicRegime::kLocalized;
}

}  // namespace dissipative
