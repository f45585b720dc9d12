#pragma once

#include <span>
#include <vector>

#include "coaltypes/rates.hpp"

namespace coaltypes {

// Descending factorial moments mu(m, j) = E[K_m (K_m - 1) ... (K_m - j + 1)]
// for 1 <= m <= n and 0 <= j <= j_max.
struct FactorialMoments {
  int n = 0;
  int j_max = 0;
  std::vector<std::vector<double>> mu;  // mu[m][j]

  double at(int m, int j) const { return mu.at(m).at(j); }
};

// Law of the number of types K_m for every sample size m <= n.
struct TypeDistribution {
  int n = 0;
  double r = 0.0;
  std::vector<std::vector<double>> p;  // p[m][k], 0 <= k <= m; p[0] unused
  FactorialMoments moments;

  double prob(int m, int k) const;
  std::span<const double> row(int m) const { return p.at(m); }
};

// Bottom-up evaluation of the first-event recursion: either the first event
// back in time is a mutation (rate m r) which removes one lineage and one
// type, or a collision that jumps to k blocks at rate g(m, k).
// Rows are never renormalized.
TypeDistribution type_distribution(const RateTable& t, double r, int n, int j_max = 2);

// P(K_n = n) = prod_{i=2}^n i r / (g_i + i r).
double all_singletons_probability(const RateTable& t, double r, int n);

FactorialMoments factorial_moments(const RateTable& t, double r, int n, int j_max);

// Ewens sampling formula for the number of types, theta^k s(n,k) / [theta]_n,
// with unsigned Stirling numbers of the first kind carried in log space.
// Entry k of the result for 0 <= k <= n.
std::vector<double> ewens_oracle(double theta, int n);

inline constexpr int kEwensMaxN = 2000;

// f_m(s) = E[s^K_m] from the generating-function recursion, for every s in
// the grid and 1 <= m <= n; result[i][m] belongs to s_grid[i].
std::vector<std::vector<double>> pgf_values(const RateTable& t, double r, int n,
                                            std::span<const double> s_grid);

}  // namespace coaltypes
