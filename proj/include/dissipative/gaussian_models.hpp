#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "dissipative/errors.hpp"
#include "dissipative/numerics.hpp"
#include "dissipative/oracle/gaussian_entropy.hpp"

namespace dissipative {

// ---------------------------------------------------------------------------
// Dissipative free particle (omega0 = 0)
// ---------------------------------------------------------------------------

/// Ohmic free particle. `length` is the normalisation length L of the reduced
/// density matrix <x|rho|x'> = exp(-a (x - x')^2) / L; the entropy is only
/// defined relative to it, so it has no default.
struct FreeParticleParams {
  double eta;
  double omega_c;
  double length;
  int dim = 1;

  void validate() const {
    if (!(eta > 0.0)) throw DomainError("free particle: eta must be > 0");
    if (!(omega_c > 0.0)) throw DomainError("free particle: omega_c must be > 0");
    if (!(length > 0.0)) throw DomainError("free particle: length must be > 0");
    if (dim < 1) throw DomainError("free particle: dimension must be >= 1");
  }
};

/// a = (eta / 4 pi) ln(1 + omega_c^2 / eta^2).
inline double free_particle_kernel_width(const FreeParticleParams& p) {
  p.validate();
  const double r = p.omega_c / p.eta;
  return p.eta / (4.0 * std::numbers::pi) * std::log1p(r * r);
}

struct FreeParticleEntropy {
  double entropy;
  double a_l2;  ///< a L^2, the only combination the entropy depends on
};

/// S = (d/2) (ln(a L^2) + 1 - ln pi). Negative when a L^2 < pi / e, i.e.
/// when L is too small for the continuum treatment.
inline FreeParticleEntropy free_particle_entropy(const FreeParticleParams& p) {
  const double a = free_particle_kernel_width(p);
  const double a_l2 = a * p.length * p.length;
  const double s = 0.5 * p.dim * (std::log(a_l2) + 1.0 - std::log(std::numbers::pi));
  return {s, a_l2};
}

// ---------------------------------------------------------------------------
// Damped harmonic oscillator
// ---------------------------------------------------------------------------

struct OscillatorParams {
  double omega0;
  double eta;
  double omega_c;

  double kappa() const { return eta / (2.0 * omega0); }

  void validate() const {
    if (!(omega0 > 0.0)) throw DomainError("oscillator: omega0 must be > 0");
    if (!(eta >= 0.0)) throw DomainError("oscillator: eta must be >= 0");
    if (!(omega_c > 0.0)) throw DomainError("oscillator: omega_c must be > 0");
  }

  /// Dimensionless coupling alpha = eta / (2 pi omega0) = kappa / pi.
  double alpha() const { return eta / (2.0 * std::numbers::pi * omega0); }

  static OscillatorParams from_alpha(double alpha, double omega0, double omega_c) {
    return {omega0, 2.0 * std::numbers::pi * alpha * omega0, omega_c};
  }
};

inline constexpr double kCriticalDampingAlpha = std::numbers::inv_pi;

/// Position-variance factor f(kappa), <q^2> = f / (2 omega0).
///
/// All three forms are (2 / (pi kappa)) F(z) with z = 1 - 1/kappa^2 and
/// F(z) = sum_n z^n / (2n + 1): artanh(sqrt z)/sqrt z for kappa > 1 (log
/// form), arctan(sqrt -z)/sqrt -z for kappa < 1. F is analytic at z = 0; the
/// series is used for |z| < 1e-3, where the closed forms lose digits.
inline double oscillator_f(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("oscillator_f: kappa must be >= 0");
  constexpr double pi = std::numbers::pi;
  if (kappa == 0.0) return 1.0;
  const double z = 1.0 - 1.0 / (kappa * kappa);
  if (std::abs(z) < 1e-3) {
    double term = 1.0;
    double sum = 0.0;
    for (int n = 0; n < 10; ++n) {
      sum += term / (2.0 * n + 1.0);
      term *= z;
    }
    return 2.0 / (pi * kappa) * sum;
  }
  if (kappa > 1.0) {
    const double r = std::sqrt(kappa * kappa - 1.0);
    // ln[(k + r)/(k - r)] = 2 ln(k + r) since (k + r)(k - r) = 1
    return 2.0 * std::log(kappa + r) / (pi * r);
  }
  const double r = std::sqrt(1.0 - kappa * kappa);
  return 2.0 / pi * std::atan2(r, kappa) / r;
}

/// Ground-state second moments of the system coordinate together with the
/// derived quantities of the Gaussian reduced density matrix.
struct MomentPair {
  double q2;
  double p2;

  double nu() const { return std::sqrt(q2 * p2); }
  double eps() const { return 1.0 / nu(); }
  /// eps sqrt(1 - eps) / sqrt(1 - eps^2/4)
  double eps_tilde() const {
    const double e = eps();
    return e * std::sqrt(1.0 - e) / std::sqrt(1.0 - 0.25 * e * e);
  }
  /// a / b = 4 <q^2><p^2>
  double a_over_b() const { return 4.0 * q2 * p2; }
};

/// <q^2> = f(kappa) / (2 omega0),
/// <p^2> = omega0^2 (1 - 2 kappa^2) <q^2> + (2 omega0 kappa / pi) ln(omega_c / omega0).
///
/// Large-cutoff expressions; a non-positive <p^2> or nu < 1/2 means the
/// parameters are outside their range of validity and raises RegimeError.
inline MomentPair oscillator_moments(const OscillatorParams& p) {
  p.validate();
  if (!(p.omega_c > p.omega0)) throw DomainError("oscillator_moments: omega_c must exceed omega0");
  const double kappa = p.kappa();
  const double q2 = oscillator_f(kappa) / (2.0 * p.omega0);
  const double p2 = p.omega0 * p.omega0 * (1.0 - 2.0 * kappa * kappa) * q2 +
                    2.0 * p.omega0 * kappa / std::numbers::pi * std::log(p.omega_c / p.omega0);
  if (!(p2 > 0.0)) {
    throw RegimeError("oscillator_moments: <p^2> = " + std::to_string(p2) +
                      " is not positive; kappa too large for omega_c/omega0");
  }
  const MomentPair m{q2, p2};
  if (m.nu() < 0.5 * (1.0 - 1e-12)) {
    throw RegimeError("oscillator_moments: nu below 1/2; omega_c/omega0 too small");
  }
  return m;
}

/// Small-eps entropy of the oscillator's reduced density matrix,
///
///   S = -[(et/e) ln et + (et/e^2) ln(1 - e)],   e = 1/nu = sqrt(4b/a),
///
/// et = eps_tilde. Requires eps < 1; intended for eps << 1.
inline double oscillator_entropy_expansion(const MomentPair& m) {
  const double e = m.eps();
  if (!(e < 1.0)) {
    throw RegimeError("oscillator_entropy_expansion: eps = " + std::to_string(e) +
                      " >= 1; use the exact Gaussian entropy");
  }
  const double et = m.eps_tilde();
  return -((et / e) * std::log(et) + (et / (e * e)) * std::log1p(-e));
}

enum class EntropyMethod { kExpansion, kExact };

inline double oscillator_entropy(const OscillatorParams& p, EntropyMethod method) {
  const MomentPair m = oscillator_moments(p);
  if (method == EntropyMethod::kExpansion) return oscillator_entropy_expansion(m);
  return oracle::gaussian_entropy(std::max(m.nu(), 0.5));
}

/// dS/dalpha at fixed omega0 and omega_c: central difference with relative
/// step 1e-4, Richardson-extrapolated once.
inline double oscillator_entropy_alpha_derivative(double alpha, double omega0, double omega_c,
                                                  EntropyMethod method) {
  auto s = [&](double a) { return oscillator_entropy(OscillatorParams::from_alpha(a, omega0, omega_c), method); };
  return numerics::richardson_derivative(s, alpha, numerics::relative_step(alpha));
}

// ---------------------------------------------------------------------------
// Gaussian kernel <x|rho|x'> = sqrt(4b/pi) exp(-a (x - x')^2 - b (x + x')^2)
// ---------------------------------------------------------------------------

enum class KernelNormalization { kRing, kConfined };

struct GaussianKernel {
  double a;
  double b;
  KernelNormalization normalization = KernelNormalization::kConfined;

  void validate() const {
    if (!(a > 0.0)) throw DomainError("GaussianKernel: a must be > 0");
    if (!(b >= 0.0)) throw DomainError("GaussianKernel: b must be >= 0");
    if (normalization == KernelNormalization::kConfined && !(b > 0.0)) {
      throw DomainError("GaussianKernel: confined kernel needs b > 0");
    }
  }
};

/// a = <p^2>/2, b = 1/(8 <q^2>): reproduces both variances.
inline GaussianKernel kernel_from_moments(const MomentPair& m) {
  return {0.5 * m.p2, 1.0 / (8.0 * m.q2), KernelNormalization::kConfined};
}

}  // namespace dissipative
