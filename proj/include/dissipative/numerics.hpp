#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dissipative/errors.hpp"

namespace dissipative::numerics {

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Adaptive Gauss-Kronrod (15 point) integration of f over [lo, hi].
/// Infinite limits are accepted. Throws NumericalError if the requested
/// relative tolerance is not reached.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, double rel_tol = 1e-10,
                           unsigned max_depth = 30) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, max_depth, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > 10.0 * rel_tol * l1) {
    throw NumericalError("quadrature did not converge: estimate " + std::to_string(value) +
                         " with error " + std::to_string(error));
  }
  return {value, error};
}

/// Central difference of f at x with step h, Richardson-extrapolated once
/// (combines steps h and h/2; error O(h^4)).
template <class F>
double richardson_derivative(F&& f, double x, double h) {
  const double d_h = (f(x + h) - f(x - h)) / (2.0 * h);
  const double h2 = 0.5 * h;
  const double d_h2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
  return (4.0 * d_h2 - d_h) / 3.0;
}

/// Step of size rel * |x| (rel itself when x == 0).
inline double relative_step(double x, double rel = 1e-4) {
  return x != 0.0 ? rel * std::abs(x) : rel;
}

/// (x) ln(x) with the continuous extension 0 at x = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace dissipative::numerics
