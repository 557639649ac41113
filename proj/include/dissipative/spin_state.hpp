#pragma once

#include <cmath>
#include <string>

#include "dissipative/errors.hpp"

namespace dissipative {

/// Reduced density matrix of the two-level system,
/// rho = (1/2) [[1 + sz, sx], [sx, 1 - sz]].
struct ReducedSpinState {
  double sx = 1.0;
  double sz = 0.0;
  double entropy = 0.0;
};

/// Entropy of the unbiased (sz = 0) spin from <sigma_x>,
///
///   S = -(1/2) [ ln((1 - sx^2)/4) + sx ln((1 + sx)/(1 - sx)) ],
///
/// with the limit S = 0 at |sx| = 1. Even in sx.
inline double spin_entropy(double sx) {
  if (!(std::abs(sx) <= 1.0)) throw DomainError("spin_entropy: |sx| must be <= 1");
  const double m = std::abs(sx);
  if (m == 1.0) return 0.0;
  // ln((1 - m^2)/4) = log1p(-m) + log1p(m) - ln 4
  const double lp = std::log1p(m);
  const double lm = std::log1p(-m);
  return -0.5 * (lp + lm - std::log(4.0) + m * (lp - lm));
}

inline double spin_entropy(const ReducedSpinState& state) { return spin_entropy(state.sx); }

inline ReducedSpinState make_spin_state(double sx) {
  return {std::abs(sx), 0.0, spin_entropy(sx)};
}

}  // namespace dissipative
