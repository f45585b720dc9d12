#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <vector>

#include "coaltypes/measure.hpp"

namespace testing {

using namespace coaltypes;

inline Measure kingman(double mass = 1.0) {
  LambdaSpec s;
  s.kingman_mass = mass;
  return Measure::validate(s);
}

inline Measure star(double mass = 1.0) {
  LambdaSpec s;
  s.star_mass = mass;
  return Measure::validate(s);
}

inline Measure beta(double a, double b, double weight = 1.0) {
  LambdaSpec s;
  s.beta.push_back({a, b, weight});
  return Measure::validate(s);
}

inline Measure lambda_atom(double u, double weight = 1.0) {
  LambdaSpec s;
  s.atoms.push_back({u, weight});
  return Measure::validate(s);
}

inline Measure xi_atom(std::vector<double> x, double weight = 1.0) {
  XiSpec s;
  s.atoms.push_back({std::move(x), weight});
  return Measure::validate(s);
}

inline Measure dirac_half_half() { return xi_atom({0.5, 0.5}); }

// Several families mixed: star mass, two beta densities and two atoms.
inline Measure lambda_mixture() {
  LambdaSpec s;
  s.star_mass = 0.3;
  s.beta.push_back({2.0, 1.0, 1.0});
  s.beta.push_back({1.5, 0.7, 0.4});
  s.atoms.push_back({0.3, 0.5});
  s.atoms.push_back({0.8, 0.2});
  return Measure::validate(s);
}

inline Measure xi_mixture() {
  XiSpec s;
  s.kingman_mass = 0.0;
  s.atoms.push_back({{0.4, 0.3, 0.2}, 1.0});
  s.atoms.push_back({{0.5, 0.25, 0.1, 0.05, 0.05}, 0.5});
  s.atoms.push_back({{0.6}, 2.0});
  return Measure::validate(s);
}

// Law of the number of blocks when n balls are thrown independently into boxes
// with probabilities x and dust 1 - |x|, by enumerating all (s+1)^n assignments.
// Enumerates all (s+1)^n box assignments in exact rational arithmetic, so the
// result is the correctly rounded law of the block count.
inline std::vector<double> brute_force_block_law(const std::vector<double>& x, int n) {
  using boost::multiprecision::cpp_rational;
  const int s = static_cast<int>(x.size());
  std::vector<cpp_rational> px(x.begin(), x.end());
  cpp_rational dust = 1;
  for (const auto& v : px) dust -= v;
  if (dust < 0) dust = 0;
  std::vector<cpp_rational> law(static_cast<std::size_t>(n) + 1, cpp_rational(0));
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= s + 1;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    cpp_rational p = 1;
    std::vector<int> used(static_cast<std::size_t>(s), 0);
    int dust_balls = 0;
    for (int i = 0; i < n; ++i) {
      const int box = static_cast<int>(c % (s + 1));
      c /= s + 1;
      if (box == s) {
        p *= dust;
        ++dust_balls;
      } else {
        p *= px[box];
        used[box] = 1;
      }
    }
    int blocks = dust_balls;
    for (int u : used) blocks += u;
    law[blocks] += p;
  }
  std::vector<double> out;
  for (const auto& v : law) out.push_back(v.convert_to<double>());
  return out;
}

// Unsigned Stirling numbers of the first kind in exact integers.
inline std::vector<std::vector<boost::multiprecision::cpp_int>> stirling_first(int n) {
  using boost::multiprecision::cpp_int;
  std::vector<std::vector<cpp_int>> s(n + 1, std::vector<cpp_int>(n + 1, 0));
  s[0][0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= m; ++k) s[m][k] = s[m - 1][k - 1] + (m - 1) * s[m - 1][k];
  }
  return s;
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testing
