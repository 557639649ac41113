#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dissipative/bath.hpp"
#include "dissipative/errors.hpp"
#include "dissipative/gaussian_models.hpp"

namespace dissipative::oracle {

enum class Discretization { kLinear, kLogarithmic };

struct BathMode {
  double omega;
  double lambda;
};

/// Finite set of bath oscillators standing in for a continuous J(omega).
struct DiscreteBath {
  std::vector<BathMode> modes;
  Discretization scheme = Discretization::kLogarithmic;

  std::size_t n_modes() const { return modes.size(); }
};

namespace detail {

struct Bin {
  double lo, hi, centre;
};

inline std::vector<Bin> make_bins(double omega_min, double omega_max, std::size_t n, Discretization scheme) {
  if (n == 0) throw ConfigError("bath discretisation needs at least one mode");
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw ConfigError("bath discretisation needs 0 < omega_min < omega_max");
  }
  std::vector<Bin> bins(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t0 = static_cast<double>(i) / static_cast<double>(n);
    const double t1 = static_cast<double>(i + 1) / static_cast<double>(n);
    if (scheme == Discretization::kLogarithmic) {
      const double ratio = std::log(omega_max / omega_min);
      const double lo = omega_min * std::exp(ratio * t0);
      const double hi = omega_min * std::exp(ratio * t1);
      bins[i] = {lo, hi, std::sqrt(lo * hi)};
    } else {
      const double lo = omega_min + (omega_max - omega_min) * t0;
      const double hi = omega_min + (omega_max - omega_min) * t1;
      bins[i] = {lo, hi, 0.5 * (lo + hi)};
    }
  }
  return bins;
}

}  // namespace detail

/// Ohmic bath J(w) = eta w (0 < w < omega_c) in the oscillator convention
/// J(w) = (pi/2) sum lambda^2 / w delta(w - w_a): each mode carries the
/// spectral weight of its bin, lambda_a^2 = (2/pi) w_a int_bin eta w dw.
inline DiscreteBath discretize_ohmic_bath(const OscillatorParams& p, std::size_t n_modes,
                                          Discretization scheme, double omega_min) {
  DiscreteBath bath{{}, scheme};
  bath.modes.reserve(n_modes);
  for (const auto& bin : detail::make_bins(omega_min, p.omega_c, n_modes, scheme)) {
    const double weight = 0.5 * p.eta * (bin.hi * bin.hi - bin.lo * bin.lo);
    bath.modes.push_back({bin.centre, std::sqrt(2.0 / std::numbers::pi * bin.centre * weight)});
  }
  return bath;
}

/// Power-law bath in the spin-boson convention J(w) = sum lambda^2 delta(w - w_k):
/// lambda_k^2 = int_bin J(w) dw.
inline DiscreteBath discretize_spin_bath(const BathSpec& spec, std::size_t n_modes, Discretization scheme,
                                         double omega_min) {
  spec.validate();
  DiscreteBath bath{{}, scheme};
  const double sp1 = spec.s + 1.0;
  const double pref = 2.0 * spec.alpha * std::pow(spec.cutoff, 1.0 - spec.s) / sp1;
  for (const auto& bin : detail::make_bins(omega_min, spec.cutoff, n_modes, scheme)) {
    const double weight = pref * (std::pow(bin.hi, sp1) - std::pow(bin.lo, sp1));
    bath.modes.push_back({bin.centre, std::sqrt(weight)});
  }
  return bath;
}

struct CovarianceResult {
  double q2;
  double p2;
  double nu;
};

/// Exact ground-state moments of the system coordinate for the oscillator
/// coupled to a discretised bath,
///
///   H = p^2/2 + w0^2 q^2/2 + sum [p_a^2/2 + w_a^2 (x_a - lambda_a q / w_a^2)^2 / 2].
///
/// With X = (q, x_1..x_N) the potential is X^T K X / 2 and the kinetic term is
/// unit-mass, so <X X^T> = K^{-1/2}/2 and <P P^T> = K^{1/2}/2.
inline CovarianceResult moments_from_bath(double omega0, const DiscreteBath& bath) {
  const auto n = static_cast<Eigen::Index>(bath.n_modes());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + 1, n + 1);
  double counter_term = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& mode = bath.modes[static_cast<std::size_t>(i)];
    k(i + 1, i + 1) = mode.omega * mode.omega;
    k(0, i + 1) = k(i + 1, 0) = -mode.lambda;
    counter_term += mode.lambda * mode.lambda / (mode.omega * mode.omega);
  }
  k(0, 0) = omega0 * omega0 + counter_term;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  if (solver.info() != Eigen::Success) throw NumericalError("discrete bath: eigensolver failed");
  const Eigen::VectorXd& w2 = solver.eigenvalues();
  if (!(w2.minCoeff() > 0.0)) throw NumericalError("discrete bath: quadratic form is not positive definite");
  const Eigen::VectorXd overlap = solver.eigenvectors().row(0).transpose().cwiseAbs2();
  const Eigen::VectorXd w = w2.cwiseSqrt();
  const double q2 = 0.5 * overlap.cwiseQuotient(w).sum();
  const double p2 = 0.5 * overlap.cwiseProduct(w).sum();
  return {q2, p2, std::sqrt(q2 * p2)};
}

/// Oracle for oscillator_moments: discretise the Ohmic bath between
/// omega_min_ratio * omega0 and omega_c and diagonalise.
inline CovarianceResult discrete_bath_moments(const OscillatorParams& p, std::size_t n_modes,
                                              Discretization scheme = Discretization::kLogarithmic,
                                              double omega_min_ratio = 1e-3) {
  p.validate();
  if (n_modes < 8) throw ConfigError("discrete_bath_moments: n_modes must be >= 8");
  const auto bath = discretize_ohmic_bath(p, n_modes, scheme, omega_min_ratio * p.omega0);
  return moments_from_bath(p.omega0, bath);
}

}  // namespace dissipative::oracle
