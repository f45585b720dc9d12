#include "coaltypes/special.hpp"

#include <cmath>
#include <limits>

namespace coaltypes::special {

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_add_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  if (x < y) std::swap(x, y);
  return x + std::log1p(std::exp(y - x));
}

double one_minus_pow(double u, double eta) {
  if (eta == 0.0 || u == 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return -std::expm1(eta * std::log1p(-u));
}

double one_minus_pow_over(double u, double eta) {
  if (u < 1e-300) return eta;
  return one_minus_pow(u, eta) / u;
}

double binomial_tail2_over_sq(int n, double u) {
  if (n < 2) return 0.0;
  if (u >= 1.0) return 1.0;
  if (n * u > 0.5) {
    const double lq = std::log1p(-u);
    const double tail = -std::expm1(n * lq) - n * u * std::exp((n - 1) * lq);
    return tail / (u * u);
  }
  // Small n*u: sum C(n, j) u^(j-2) (1-u)^(n-j) over j >= 2 directly; the terms
  // shrink at least geometrically with ratio below n*u.
  const double q = 1.0 - u;
  double term = 0.5 * n * (n - 1.0) * std::pow(q, n - 2);
  double sum = 0.0;
  for (int j = 2; j <= n; ++j) {
    sum += term;
    if (term < 1e-18 * sum) break;
    term *= (n - j) / (j + 1.0) * u / q;
  }
  return sum;
}

BinomialTable::BinomialTable(int n) : rows_(static_cast<std::size_t>(n) + 1) {
  for (int i = 0; i <= n; ++i) {
    rows_[i].assign(static_cast<std::size_t>(i) + 1, 1.0);
    for (int j = 1; j < i; ++j) rows_[i][j] = rows_[i - 1][j - 1] + rows_[i - 1][j];
  }
}

}  // namespace coaltypes::special
