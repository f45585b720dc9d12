#include "coaltypes/exact.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "coaltypes/errors.hpp"
#include "coaltypes/special.hpp"

namespace coaltypes {

namespace {

void check_inputs(const RateTable& t, double r, int n) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "mutation rate must be positive");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  if (n > 1 && n > t.n_max()) {
    throw Error(ErrorCode::RateTableTooSmall, "rate table covers n <= " + std::to_string(t.n_max()) +
                                                  ", requested n = " + std::to_string(n));
  }
}

}  // namespace

double TypeDistribution::prob(int m, int k) const {
  if (m < 1 || m > n || k < 0 || k > m) return 0.0;
  return p[m][k];
}

TypeDistribution type_distribution(const RateTable& t, double r, int n, int j_max) {
  check_inputs(t, r, n);
  TypeDistribution out;
  out.n = n;
  out.r = r;
  out.p.resize(static_cast<std::size_t>(n) + 1);
  out.p[1] = {0.0, 1.0};
  for (int m = 2; m <= n; ++m) {
    auto& row = out.p[m];
    row.assign(static_cast<std::size_t>(m) + 1, 0.0);
    const double mutation = m * r;
    const double denom = t.total(m) + mutation;
    const auto g = t.row(m);
    for (int k = 1; k <= m; ++k) {
      double value = mutation * out.p[m - 1][k - 1];
      for (int i = k; i < m; ++i) value += g[i] * out.p[i][k];
      row[k] = value / denom;
    }
  }
  out.moments = factorial_moments(t, r, n, j_max);
  return out;
}

double all_singletons_probability(const RateTable& t, double r, int n) {
  check_inputs(t, r, n);
  double p = 1.0;
  for (int i = 2; i <= n; ++i) p *= i * r / (t.total(i) + i * r);
  return p;
}

FactorialMoments factorial_moments(const RateTable& t, double r, int n, int j_max) {
  check_inputs(t, r, n);
  if (j_max < 0) throw Error(ErrorCode::InvalidArgument, "j_max must be nonnegative");
  FactorialMoments out;
  out.n = n;
  out.j_max = j_max;
  out.mu.assign(static_cast<std::size_t>(n) + 1, std::vector<double>(static_cast<std::size_t>(j_max) + 1, 0.0));
  out.mu[1][0] = 1.0;
  if (j_max >= 1) out.mu[1][1] = 1.0;
  for (int m = 2; m <= n; ++m) {
    out.mu[m][0] = 1.0;
    const double mutation = m * r;
    const double denom = t.total(m) + mutation;
    const auto g = t.row(m);
    for (int j = 1; j <= j_max; ++j) {
      double value = mutation * (out.mu[m - 1][j] + j * out.mu[m - 1][j - 1]);
      for (int k = 1; k < m; ++k) value += g[k] * out.mu[k][j];
      out.mu[m][j] = value / denom;
    }
  }
  return out;
}

std::vector<double> ewens_oracle(double theta, int n) {
  if (!(theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be positive");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  if (n > kEwensMaxN) {
    throw Error(ErrorCode::Overflow, "Ewens oracle supports n <= " + std::to_string(kEwensMaxN));
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  // log s(m, k) with s(m, k) = s(m-1, k-1) + (m-1) s(m-1, k).
  std::vector<double> log_s{0.0};  // m = 0
  for (int m = 1; m <= n; ++m) {
    std::vector<double> next(static_cast<std::size_t>(m) + 1, kNegInf);
    const double log_factor = m > 1 ? std::log(m - 1.0) : kNegInf;
    for (int k = 1; k <= m; ++k) {
      const double from_new = log_s[k - 1];
      const double from_old = k < m ? log_factor + log_s[k] : kNegInf;
      next[k] = special::log_add_exp(from_new, from_old);
    }
    log_s = std::move(next);
  }
  double log_rising = 0.0;
  for (int i = 0; i < n; ++i) log_rising += std::log(theta + i);
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  const double log_theta = std::log(theta);
  for (int k = 1; k <= n; ++k) out[k] = std::exp(k * log_theta + log_s[k] - log_rising);
  return out;
}

std::vector<std::vector<double>> pgf_values(const RateTable& t, double r, int n,
                                            std::span<const double> s_grid) {
  check_inputs(t, r, n);
  std::vector<std::vector<double>> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    std::vector<double> f(static_cast<std::size_t>(n) + 1, 0.0);
    f[1] = s;
    for (int m = 2; m <= n; ++m) {
      const auto g = t.row(m);
      double value = m * r * s * f[m - 1];
      for (int k = 1; k < m; ++k) value += g[k] * f[k];
      f[m] = value / (t.total(m) + m * r);
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace coaltypes
