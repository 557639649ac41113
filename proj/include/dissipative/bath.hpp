#pragma once

#include <cmath>
#include <string>

#include "dissipative/errors.hpp"

namespace dissipative {

/// Power-law bosonic bath with a sharp cutoff,
///
///   J(w) = 2 alpha w^s cutoff^(1-s)   for 0 <= w <= cutoff,   0 above.
///
/// s = 1 is Ohmic, s < 1 sub-Ohmic, s > 1 super-Ohmic. The overall
/// proportionality constant is fixed to one, so the Ohmic bath gives
/// J = 2 alpha w and the tunnelling flow Delta(L) = Delta0 (L / cutoff)^alpha.
struct BathSpec {
  double s = 1.0;
  double alpha = 0.0;
  double cutoff = 1.0;

  void validate() const {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("bath exponent s must be > 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("coupling alpha must be >= 0");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("bath cutoff must be > 0");
  }

  bool ohmic() const { return std::abs(s - 1.0) < 1e-12; }
};

/// J(omega) for the sharp-cutoff power law. Throws DomainError for omega < 0.
inline double spectral_density(const BathSpec& bath, double omega) {
  bath.validate();
  if (!(omega >= 0.0)) throw DomainError("spectral_density: omega must be >= 0");
  if (omega > bath.cutoff) return 0.0;
  if (omega == 0.0) return 0.0;
  return 2.0 * bath.alpha * std::pow(omega, bath.s) * std::pow(bath.cutoff, 1.0 - bath.s);
}

/// Exponent phi(L) = (1/2) int_L^cutoff J(w)/w^2 dw, so that the adiabatically
/// renormalised tunnelling is Delta(L) = Delta0 exp(-phi(L)).
///
/// The same factor 1/2 is used in the self-consistency for Delta_ren; only
/// then do the Ohmic power law Delta0 (Delta0/cutoff)^(alpha/(1-alpha)) and the
/// super-Ohmic limit Delta0 exp(-alpha/(s-1)) follow.
inline double adiabatic_exponent(const BathSpec& bath, double lambda_low) {
  bath.validate();
  if (!(lambda_low > 0.0) || lambda_low > bath.cutoff) {
    throw DomainError("adiabatic_exponent: lambda must lie in (0, cutoff]");
  }
  const double ratio = lambda_low / bath.cutoff;
  if (bath.ohmic()) return -bath.alpha * std::log(ratio);
  // (alpha/(1-s)) [ratio^(s-1) - 1], written with expm1 so that s -> 1 and
  // ratio -> 1 lose no digits.
  const double sm1 = bath.s - 1.0;
  return -bath.alpha * std::expm1(sm1 * std::log(ratio)) / sm1;
}

/// d phi / d L = -J(L) / (2 L^2).
inline double adiabatic_exponent_slope(const BathSpec& bath, double lambda) {
  return -spectral_density(bath, lambda) / (2.0 * lambda * lambda);
}

}  // namespace dissipative
