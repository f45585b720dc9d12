#pragma once

#include <functional>

namespace coaltypes::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

inline constexpr double kQuadratureAbsTol = 1e-10;
inline constexpr double kQuadratureRelTol = 1e-10;

// Adaptive Gauss-Kronrod on [lo, hi]; throws QuadratureFailure when the error
// estimate misses both tolerances.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi);

// int_0^1 (1 - (1-u)^eta) u^(a-3) (1-u)^(b-1) du for a > 1, b > 0. The left
// half uses u = t^(1/(a-1)) when a < 2 and the right half 1-u = s^(1/b) when
// b < 1, which turn the endpoint power singularities into bounded integrands.
double beta_laplace_integral(double eta, double a, double b);

}  // namespace coaltypes::detail
