#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "coaltypes/errors.hpp"
#include "coaltypes/special.hpp"

namespace coaltypes::detail {

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::tanh_sinh;
  const auto accepted = [](double value, double error) {
    return std::isfinite(value) &&
           error <= std::max(kQuadratureAbsTol, kQuadratureRelTol * std::abs(value));
  };
  double error = 0.0;
  double l1 = 0.0;
  double value = gauss_kronrod<double, 31>::integrate(f, lo, hi, 25, 1e-13, &error, &l1);
  if (accepted(value, error)) return {value, error};

  // Fractional-power endpoint behaviour defeats bisection; the double
  // exponential rule clusters nodes at the endpoints instead.
  tanh_sinh<double> endpoint_rule;
  value = endpoint_rule.integrate(f, lo, hi, 1e-13, &error, &l1);
  if (accepted(value, error)) return {value, error};
  throw Error(ErrorCode::QuadratureFailure,
              "adaptive quadrature on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                  "] stopped with error estimate " + std::to_string(error));
}

double beta_laplace_integral(double eta, double a, double b) {
  using special::one_minus_pow_over;
  double left = 0.0;
  if (a < 2.0) {
    const double p = a - 1.0;
    const auto g = [=](double t) {
      const double u = std::pow(t, 1.0 / p);
      return one_minus_pow_over(u, eta) * std::pow(1.0 - u, b - 1.0) / p;
    };
    left = integrate(g, 0.0, std::pow(0.5, p)).value;
  } else {
    const auto g = [=](double u) {
      return one_minus_pow_over(u, eta) * std::pow(u, a - 2.0) * std::pow(1.0 - u, b - 1.0);
    };
    left = integrate(g, 0.0, 0.5).value;
  }

  double right = 0.0;
  if (b < 1.0) {
    const auto g = [=](double s) {
      const double w = std::pow(s, 1.0 / b);  // 1 - u
      const double u = 1.0 - w;
      return -std::expm1(eta * std::log(w)) * std::pow(u, a - 3.0) / b;
    };
    right = integrate(g, 0.0, std::pow(0.5, b)).value;
  } else {
    const auto g = [=](double u) {
      return special::one_minus_pow(u, eta) * std::pow(u, a - 3.0) * std::pow(1.0 - u, b - 1.0);
    };
    right = integrate(g, 0.5, 1.0).value;
  }
  return left + right;
}

}  // namespace coaltypes::detail
