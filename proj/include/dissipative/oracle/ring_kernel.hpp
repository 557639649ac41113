#pragma once

#include <cmath>
#include <numbers>

#include "dissipative/errors.hpp"

namespace dissipative::oracle {

struct RingSpectrumEntropy {
  double entropy;
  double trace;
  double tail;  ///< spectral weight beyond |n| = n_max
};

/// Entropy of the translation-invariant kernel exp(-a (x - x')^2) / L on a
/// ring of circumference L, from its Fourier eigenvalues
///
///   lambda_n = (1/L) sqrt(pi/a) exp(-k_n^2 / (4a)),   k_n = 2 pi n / L,
///
/// summed over |n| <= n_max. Valid for a L^2 >> 1, where the periodic images
/// of the Gaussian are negligible. Throws NumericalError if the omitted tail
/// exceeds 1e-12.
inline RingSpectrumEntropy ring_kernel_entropy(double a, double length, long n_max) {
  if (!(a > 0.0) || !(length > 0.0)) throw DomainError("ring_kernel_entropy: a and L must be > 0");
  if (n_max < 0) throw DomainError("ring_kernel_entropy: n_max must be >= 0");
  constexpr double pi = std::numbers::pi;
  const double log_prefactor = 0.5 * std::log(pi / a) - std::log(length);
  const double dk = 2.0 * pi / length;

  auto log_lambda = [&](long n) {
    const double k = dk * static_cast<double>(n);
    return log_prefactor - k * k / (4.0 * a);
  };

  double trace = 0.0;
  double entropy = 0.0;
  for (long n = -n_max; n <= n_max; ++n) {
    const double ll = log_lambda(n);
    const double lam = std::exp(ll);
    trace += lam;
    entropy -= lam * ll;
  }

  double tail = 0.0;
  for (long n = n_max + 1;; ++n) {
    const double lam = std::exp(log_lambda(n));
    tail += 2.0 * lam;
    if (lam < 1e-30 || n > n_max + 1000000) break;
  }
  if (tail > 1e-12) throw NumericalError("ring_kernel_entropy: truncation tail above 1e-12; raise n_max");
  return {entropy, trace, tail};
}

/// Smallest n_max whose omitted tail is below 1e-14 (k^2/(4a) > 36).
inline long ring_required_modes(double a, double length) {
  const double k_max = 2.0 * std::sqrt(a * 36.0);
  return static_cast<long>(std::ceil(k_max * length / (2.0 * std::numbers::pi))) + 1;
}

}  // namespace dissipative::oracle
