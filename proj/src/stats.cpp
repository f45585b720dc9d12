#include "coaltypes/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "coaltypes/errors.hpp"

namespace coaltypes::stats {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "KS statistic of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  if (m == 0) return c / std::sqrt(static_cast<double>(n));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

ChiSquareResult chi_square_gof(std::span<const long long> observed, std::span<const double> probabilities,
                               double min_expected) {
  if (observed.size() != probabilities.size()) {
    throw Error(ErrorCode::InvalidArgument, "observed counts and probabilities differ in length");
  }
  long long total = 0;
  for (long long o : observed) total += o;
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs = 0.0;
  double exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    obs += static_cast<double>(observed[i]);
    exp += probabilities[i] * static_cast<double>(total);
    if (exp >= min_expected) {
      cells.emplace_back(obs, exp);
      obs = 0.0;
      exp = 0.0;
    }
  }
  if (obs > 0.0 || exp > 0.0) {
    if (cells.empty()) {
      cells.emplace_back(obs, exp);
    } else {
      cells.back().first += obs;
      cells.back().second += exp;
    }
  }
  ChiSquareResult result;
  for (const auto& [o, e] : cells) {
    if (e > 0.0) result.statistic += (o - e) * (o - e) / e;
  }
  result.dof = static_cast<int>(cells.size()) - 1;
  if (result.dof >= 1) {
    result.p_value = boost::math::cdf(boost::math::complement(
        boost::math::chi_squared_distribution<double>(result.dof), result.statistic));
  }
  return result;
}

void RunningMoments::add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / count;
  m2 += delta * (x - mean);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count + other.count);
  const double delta = other.mean - mean;
  mean += delta * other.count / total;
  m2 += other.m2 + delta * delta * static_cast<double>(count) * other.count / total;
  count += other.count;
}

}  // namespace coaltypes::stats
