#pragma once

#include <cmath>

#include "dissipative/errors.hpp"

namespace dissipative::oracle {

/// Von Neumann entropy of a single-mode Gaussian state with symplectic
/// eigenvalue nu = sqrt(<q^2><p^2>) (hbar = 1):
///
///   S(nu) = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2).
inline double gaussian_entropy(double nu) {
  if (!(nu >= 0.5) || !std::isfinite(nu)) throw DomainError("gaussian_entropy: nu must be >= 1/2");
  const double excess = nu - 0.5;
  if (excess == 0.0) return 0.0;
  if (nu < 2.0) return (nu + 0.5) * std::log(nu + 0.5) - excess * std::log(excess);
  // ln nu + (nu + 1/2) ln(1 + u) - (nu - 1/2) ln(1 - u), u = 1/(2 nu); avoids
  // the cancellation between two large x ln x terms.
  const double u = 0.5 / nu;
  return std::log(nu) + (nu + 0.5) * std::log1p(u) - excess * std::log1p(-u);
}

}  // namespace dissipative::oracle
