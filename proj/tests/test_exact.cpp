#include <doctest.h>

#include <cmath>

#include "coaltypes/errors.hpp"
#include "coaltypes/exact.hpp"
#include "coaltypes/rational.hpp"
#include "support.hpp"

using namespace coaltypes;
using namespace testing;

namespace {

// theta^k s(n,k) / [theta]_n with exact Stirling numbers, for moderate n.
std::vector<double> ewens_exact(double theta, int n) {
  const auto s = stirling_first(n);
  double rising = 1.0;
  for (int i = 0; i < n; ++i) rising *= theta + i;
  std::vector<double> out(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) out[k] = std::pow(theta, k) * s[n][k].convert_to<double>() / rising;
  return out;
}

}  // namespace

TEST_CASE("worked distribution examples") {
  SUBCASE("Kingman theta = 1, n = 3") {
    const auto d = type_distribution(build_rate_table(kingman(), 3), 0.5, 3);
    CHECK(d.prob(3, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(d.prob(3, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.prob(3, 3) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  }
  SUBCASE("n = 1") {
    const auto d = type_distribution(build_rate_table(beta(2.0, 1.0), 2), 0.7, 1);
    CHECK(d.prob(1, 1) == 1.0);
    CHECK(all_singletons_probability(build_rate_table(star(), 2), 1.0, 1) == 1.0);
  }
  SUBCASE("star r = 1, n = 2") {
    const auto t = build_rate_table(star(), 2);
    const auto d = type_distribution(t, 1.0, 2);
    CHECK(d.prob(2, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d.prob(2, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(all_singletons_probability(t, 1.0, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("table too small") {
    const auto t = build_rate_table(kingman(), 5);
    try {
      type_distribution(t, 1.0, 6);
      FAIL("expected RateTableTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RateTableTooSmall);
    }
  }
}

TEST_CASE("Ewens oracle") {
  SUBCASE("small cases") {
    const auto e = ewens_oracle(1.0, 3);
    CHECK(e[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(e[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(ewens_oracle(0.3, 1)[1] == 1.0);
    CHECK(ewens_oracle(2.0, 2)[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("log-space Stirling numbers match exact integers") {
    for (double theta : {0.5, 1.0, 2.0, 7.5}) {
      for (int n : {5, 20, 60}) {
        const auto a = ewens_oracle(theta, n);
        const auto b = ewens_exact(theta, n);
        for (int k = 1; k <= n; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-13);
      }
    }
  }
  SUBCASE("large n stays finite") {
    const auto e = ewens_oracle(1.0, 1500);
    double sum = 0.0;
    for (double v : e) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(ewens_oracle(1.0, kEwensMaxN + 1), Error);
  }
  SUBCASE("recursion on Kingman reproduces Ewens") {
    for (double r : {0.25, 0.5, 1.0}) {
      const auto d = type_distribution(build_rate_table(kingman(), 50), r, 50);
      for (int n = 1; n <= 50; ++n) {
        const auto e = ewens_exact(2.0 * r, n);
        for (int k = 1; k <= n; ++k) CHECK(std::abs(d.prob(n, k) - e[k]) < 1e-10);
      }
    }
  }
}

TEST_CASE("normalization, support and closed product") {
  for (const auto& m : {kingman(), star(), beta(2.0, 1.0), beta(0.8, 1.1), lambda_mixture(), xi_mixture(),
                        dirac_half_half()}) {
    const auto t = build_rate_table(m, 100);
    const auto d = type_distribution(t, 0.8, 100);
    for (int n = 1; n <= 100; ++n) {
      double sum = 0.0;
      for (int k = 1; k <= n; ++k) {
        CHECK(d.prob(n, k) >= 0.0);
        sum += d.prob(n, k);
      }
      CHECK(std::abs(sum - 1.0) < 1e-10);
      CHECK(rel_err(all_singletons_probability(t, 0.8, n), d.prob(n, n)) < 1e-12);
    }
    CHECK(d.prob(3, 4) == 0.0);
  }
  SUBCASE("Kingman closed product") {
    const auto t = build_rate_table(kingman(), 30);
    const double theta = 1.3;
    double expected = 1.0;
    for (int i = 2; i <= 30; ++i) expected *= theta / (theta + i - 1.0);
    CHECK(rel_err(all_singletons_probability(t, theta / 2.0, 30), expected) < 1e-13);
  }
}

TEST_CASE("factorial moments") {
  SUBCASE("Kingman mean") {
    const auto fm = factorial_moments(build_rate_table(kingman(), 3), 0.5, 3, 2);
    CHECK(fm.at(3, 1) == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
    CHECK(fm.at(1, 2) == 0.0);
    CHECK(fm.at(1, 1) == 1.0);
  }
  SUBCASE("mean and second moment match the distribution") {
    const auto t = build_rate_table(lambda_mixture(), 40);
    const auto d = type_distribution(t, 1.3, 40, 3);
    for (int n = 1; n <= 40; ++n) {
      double mean = 0.0, second = 0.0, third = 0.0;
      for (int k = 1; k <= n; ++k) {
        mean += k * d.prob(n, k);
        second += k * (k - 1.0) * d.prob(n, k);
        third += k * (k - 1.0) * (k - 2.0) * d.prob(n, k);
      }
      CHECK(rel_err(d.moments.at(n, 1), mean) < 1e-9);
      CHECK(std::abs(d.moments.at(n, 2) - second) < 1e-9 * std::max(1.0, second));
      CHECK(std::abs(d.moments.at(n, 3) - third) < 1e-9 * std::max(1.0, third));
    }
  }
  SUBCASE("top diagonal is n! P(K_n = n)") {
    for (const auto& m : {kingman(), beta(1.5, 0.5), xi_mixture()}) {
      const auto t = build_rate_table(m, 20);
      const auto d = type_distribution(t, 0.6, 20);
      const auto fm = factorial_moments(t, 0.6, 20, 20);
      double factorial = 1.0;
      for (int n = 1; n <= 20; ++n) {
        factorial *= n;
        CHECK(rel_err(fm.at(n, n), factorial * d.prob(n, n)) < 1e-9);
      }
    }
  }
  SUBCASE("Kingman mean is theta sum 1/(theta + i)") {
    const double theta = 0.9;
    const auto fm = factorial_moments(build_rate_table(kingman(), 40), theta / 2.0, 40, 1);
    double expected = 0.0;
    for (int i = 0; i < 40; ++i) expected += theta / (theta + i);
    CHECK(rel_err(fm.at(40, 1), expected) < 1e-12);
  }
}

TEST_CASE("generating function") {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  SUBCASE("agrees with the polynomial of the distribution") {
    for (const auto& m : {beta(2.0, 1.0), xi_mixture(), kingman()}) {
      const auto t = build_rate_table(m, 30);
      const auto d = type_distribution(t, 0.7, 30);
      const auto f = pgf_values(t, 0.7, 30, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int n = 1; n <= 30; ++n) {
          double poly = 0.0;
          for (int k = n; k >= 1; --k) poly = (poly + d.prob(n, k)) * grid[i];
          CHECK(std::abs(f[i][n] - poly) < 1e-9);
        }
      }
      CHECK(f.back()[30] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(f.front()[30] == 0.0);
    }
  }
  SUBCASE("star recursion (1 + n r) f_n(s) = n r s f_{n-1}(s) + s") {
    const double r = 0.45;
    const auto f = pgf_values(build_rate_table(star(), 15), r, 15, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (int n = 2; n <= 15; ++n) {
        CHECK((1 + n * r) * f[i][n] == doctest::Approx(n * r * grid[i] * f[i][n - 1] + grid[i]).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("exact rational recursion") {
  SUBCASE("matches the floating-point recursion") {
    for (const auto& m : {xi_mixture(), lambda_atom(0.3), dirac_half_half()}) {
      const auto rd = exact_rational_distribution(m, 0.75, 12);
      const auto d = type_distribution(build_rate_table(m, 12), 0.75, 12);
      for (int n = 1; n <= 12; ++n) {
        Rational sum = 0;
        for (int k = 1; k <= n; ++k) {
          sum += rd.p[n][k];
          CHECK(std::abs(rd.p[n][k].convert_to<double>() - d.prob(n, k)) < 1e-13);
        }
        CHECK(sum == 1);
      }
    }
  }
  SUBCASE("Kingman theta = 1 is exactly Ewens") {
    const auto rd = exact_rational_distribution(kingman(), 0.5, 3);
    CHECK(rd.p[3][1] == Rational(1, 3));
    CHECK(rd.p[3][2] == Rational(1, 2));
    CHECK(rd.p[3][3] == Rational(1, 6));
  }
  SUBCASE("refusals") {
    CHECK_THROWS_AS(exact_rational_distribution(beta(2.0, 1.0), 1.0, 5), Error);
    CHECK_THROWS_AS(exact_rational_distribution(kingman(), 1.0, kRationalMaxN + 1), Error);
    CHECK(exact_rational(0.1) != Rational(1, 10));
    CHECK(exact_rational(0.375) == Rational(3, 8));
  }
}
