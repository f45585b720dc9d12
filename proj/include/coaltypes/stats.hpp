#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Goodness-of-fit helpers used to compare simulated and exact laws.
namespace coaltypes::stats {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic Kolmogorov critical values; m == 0 selects the one-sample form.
double ks_critical_value(double alpha, std::size_t n, std::size_t m = 0);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson goodness of fit. Adjacent cells are pooled until each pooled cell has
// expected count >= min_expected.
ChiSquareResult chi_square_gof(std::span<const long long> observed, std::span<const double> probabilities,
                               double min_expected = 5.0);

struct RunningMoments {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const RunningMoments& other);
  double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
};

}  // namespace coaltypes::stats
