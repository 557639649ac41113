#pragma once

#include <cmath>
#include <numbers>

#include "dissipative/errors.hpp"
#include "dissipative/gaussian_models.hpp"

namespace dissipative::oracle {

/// Tr rho^n for the confined Gaussian kernel, computed three ways.
struct TracePower {
  /// (4b)^(n/2) / sqrt(det A), det A from the eigenvalues
  /// 2(a+b) - 2(a-b) cos(2 pi m / n) of the cyclic tridiagonal matrix A.
  double determinant;
  /// Small-eps form et^n / (1 - (1 - e)^n), e = sqrt(4b/a).
  double expansion;
  /// Gaussian-state value 1 / ((nu + 1/2)^n - (nu - 1/2)^n), nu = sqrt(a/b)/2.
  double symplectic;
};

inline TracePower trace_power(const GaussianKernel& kernel, int n) {
  kernel.validate();
  if (n < 1) throw DomainError("trace_power: n must be >= 1");
  if (!(kernel.b > 0.0) || !(kernel.a > kernel.b)) throw DomainError("trace_power: requires a > b > 0");
  const double a = kernel.a;
  const double b = kernel.b;

  double log_det = 0.0;
  for (int m = 1; m <= n; ++m) {
    const double k = 2.0 * std::numbers::pi * m / n;
    log_det += std::log(2.0 * (a + b) - 2.0 * (a - b) * std::cos(k));
  }
  const double determinant = std::exp(0.5 * n * std::log(4.0 * b) - 0.5 * log_det);

  const double e = std::sqrt(4.0 * b / a);
  double expansion = 0.0;
  if (e < 1.0) {
    const double et = e * std::sqrt(1.0 - e) / std::sqrt(1.0 - 0.25 * e * e);
    expansion = std::pow(et, n) / -std::expm1(n * std::log1p(-e));
  } else {
    expansion = std::nan("");
  }

  const double nu = 0.5 * std::sqrt(a / b);
  const double symplectic = 1.0 / (std::pow(nu + 0.5, n) - std::pow(nu - 0.5, n));
  return {determinant, expansion, symplectic};
}

struct GeometricSpectrumEntropy {
  double entropy;
  double trace;
};

/// Entropy from the spectrum implied by expanding 1/(1 - (1-e)^n) as a
/// geometric series: Tr rho^n = sum_k (et (1-e)^k)^n, i.e. eigenvalues
/// lambda_k = et (1-e)^k. Summed until lambda_k < 1e-300 or k_max.
inline GeometricSpectrumEntropy expansion_spectrum_entropy(double e, long k_max = 100000000) {
  if (!(e > 0.0 && e < 1.0)) throw DomainError("expansion_spectrum_entropy: eps must be in (0, 1)");
  const double et = e * std::sqrt(1.0 - e) / std::sqrt(1.0 - 0.25 * e * e);
  const double log_et = std::log(et);
  const double log_r = std::log1p(-e);
  long double entropy = 0.0L;
  long double trace = 0.0L;
  for (long k = 0; k < k_max; ++k) {
    const long double ll = log_et + static_cast<long double>(k) * log_r;
    const long double lam = std::exp(ll);
    if (lam < 1e-300L) break;
    trace += lam;
    entropy -= lam * ll;
  }
  return {static_cast<double>(entropy), static_cast<double>(trace)};
}

}  // namespace dissipative::oracle
