#include <doctest.h>

#include <cmath>

#include "coaltypes/errors.hpp"
#include "coaltypes/measure.hpp"
#include "support.hpp"

using namespace coaltypes;
using namespace testing;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("validation accepts and rejects") {
  CHECK(kingman().kind() == MeasureKind::Lambda);

  XiSpec bad;
  bad.atoms.push_back({{0.5, 0.6}, 1.0});
  CHECK(code_of([&] { Measure::validate(bad); }) == ErrorCode::SimplexViolation);

  XiSpec too_big;
  too_big.atoms.push_back({{0.7, 0.4}, 1.0});
  CHECK(code_of([&] { Measure::validate(too_big); }) == ErrorCode::SimplexViolation);

  const auto m = dirac_half_half();
  CHECK(m.xi().atoms[0].size() == 1.0);
  CHECK(m.xi().atoms[0].self_inner() == 0.5);

  LambdaSpec neg;
  neg.star_mass = -1.0;
  neg.kingman_mass = 2.0;
  CHECK(code_of([&] { Measure::validate(neg); }) == ErrorCode::NegativeWeight);

  LambdaSpec inf;
  inf.kingman_mass = INFINITY;
  CHECK(code_of([&] { Measure::validate(inf); }) == ErrorCode::NonfiniteMass);

  LambdaSpec empty;
  CHECK(code_of([&] { Measure::validate(empty); }) == ErrorCode::NonfiniteMass);

  LambdaSpec dup;
  dup.atoms = {{0.3, 1.0}, {0.3, 2.0}};
  CHECK(code_of([&] { Measure::validate(dup); }) == ErrorCode::DuplicateAtom);

  XiSpec dupx;
  dupx.atoms = {{{0.3, 0.2}, 1.0}, {{0.3, 0.2}, 1.0}};
  CHECK(code_of([&] { Measure::validate(dupx); }) == ErrorCode::DuplicateAtom);

  LambdaSpec out_of_range;
  out_of_range.atoms = {{1.0, 1.0}};
  CHECK(code_of([&] { Measure::validate(out_of_range); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("condition report") {
  SUBCASE("beta grid") {
    CHECK_FALSE(condition_report(beta(0.5, 1.0)).proper_freq_condition);
    CHECK_FALSE(condition_report(beta(0.5, 1.0)).simple_condition);
    CHECK(condition_report(beta(1.5, 0.5)).proper_freq_condition);
    CHECK_FALSE(condition_report(beta(1.5, 0.5)).simple_condition);
    CHECK(condition_report(beta(2.5, 1.0)).proper_freq_condition);
    CHECK(condition_report(beta(2.5, 1.0)).simple_condition);
    CHECK_FALSE(condition_report(beta(1.5, 0.5)).m0.is_finite());
  }
  SUBCASE("Kingman") {
    const auto r = condition_report(kingman());
    CHECK_FALSE(r.proper_freq_condition);
    CHECK_FALSE(r.simple_condition);
  }
  SUBCASE("Dirac atom") {
    const auto r = condition_report(dirac_half_half());
    CHECK(r.proper_freq_condition);
    CHECK(r.simple_condition);
    CHECK(r.h1.value() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.m0.value() == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("infinite values refuse arithmetic") {
    CHECK_THROWS_AS(condition_report(kingman()).h1.value(), Error);
    CHECK(condition_report(kingman()).h1.str() == "infinity");
  }
}

TEST_CASE("Laplace exponent") {
  SUBCASE("beta at eta = 1 is (a + b - 1) / (a - 1)") {
    for (auto [a, b] : {std::pair{1.5, 0.5}, {2.0, 1.0}, {3.5, 0.3}, {1.2, 2.5}}) {
      CHECK(rel_err(laplace_exponent(beta(a, b), 1.0), (a + b - 1.0) / (a - 1.0)) < 1e-13);
    }
  }
  SUBCASE("beta(2 - alpha, alpha) closed form at noninteger eta") {
    const double al = 0.5;
    for (double eta : {0.3, 1.7, 2.7, 7.25}) {
      const double expected =
          eta * std::tgamma(eta + al) / ((1.0 - al) * std::tgamma(al + 1.0) * std::tgamma(eta + 1.0));
      CHECK(rel_err(laplace_exponent(beta(2.0 - al, al), eta), expected) < 1e-9);
    }
  }
  SUBCASE("quadrature against high-precision reference values") {
    // (B(a-2, b) - B(a-2, b+eta)) / B(a, b), continued analytically below a = 2,
    // evaluated with mpmath at 30 digits.
    CHECK(rel_err(laplace_exponent(beta(3.5, 0.3), 1.5), 1.19876673084725890345) < 1e-9);
    CHECK(rel_err(laplace_exponent(beta(1.2, 2.5), 0.37), 5.14422081440685326311) < 1e-9);
  }
  SUBCASE("integer and noninteger paths join continuously") {
    const auto m = beta(1.7, 0.9);
    for (int eta : {1, 2, 5}) {
      CHECK(rel_err(laplace_exponent(m, eta), laplace_exponent(m, eta + 1e-9)) < 1e-7);
    }
  }
  SUBCASE("Dirac atom on |x| = 1 is constant") {
    for (double eta : {0.5, 1.0, 2.0, 13.0}) CHECK(laplace_exponent(dirac_half_half(), eta) == 2.0);
    CHECK(laplace_exponent(dirac_half_half(), 0.0) == 0.0);
  }
  SUBCASE("nondecreasing and concave on a grid") {
    for (const auto& m : {lambda_mixture(), xi_mixture(), beta(1.3, 2.0)}) {
      double prev = 0.0;
      double prev_step = INFINITY;
      for (int i = 1; i <= 20; ++i) {
        const double v = laplace_exponent(m, 0.5 * i);
        CHECK(v >= prev);
        CHECK(v - prev <= prev_step * (1.0 + 1e-9));
        prev_step = v - prev;
        prev = v;
      }
    }
  }
  SUBCASE("2 Phi(1) - Phi(2) is the squared size integral") {
    for (const auto& m : {xi_mixture(), dirac_half_half(), lambda_atom(0.3), star()}) {
      const double lhs = 2.0 * laplace_exponent(m, 1.0) - laplace_exponent(m, 2.0);
      CHECK(std::abs(lhs - squared_size_integral(m)) < 1e-12);
    }
    const auto b = beta(2.5, 1.5);
    CHECK(rel_err(2.0 * laplace_exponent(b, 1.0) - laplace_exponent(b, 2.0), squared_size_integral(b)) < 1e-12);
  }
  SUBCASE("Lambda and embedded Xi paths agree") {
    LambdaSpec s;
    s.star_mass = 0.5;
    s.atoms = {{0.2, 1.0}, {0.7, 0.3}};
    const auto m = Measure::validate(s);
    const auto x = m.as_xi();
    for (double eta : {0.5, 1.0, 3.0, 4.5}) {
      CHECK(rel_err(laplace_exponent(m, eta), laplace_exponent(x, eta)) < 1e-12);
    }
  }
  SUBCASE("condition gating") {
    CHECK_THROWS_AS(laplace_exponent(kingman(), 1.0), Error);
    CHECK_THROWS_AS(laplace_exponent(beta(1.0, 1.0), 1.0), Error);
  }
}

TEST_CASE("Levy measure description") {
  const auto d = levy_density_description(dirac_half_half());
  REQUIRE(d.atoms.size() == 1);
  CHECK_FALSE(d.atoms[0].location.is_finite());
  CHECK(d.atoms[0].mass == 2.0);

  const auto one = levy_density_description(xi_atom({0.5}));
  REQUIRE(one.atoms.size() == 1);
  CHECK(one.atoms[0].location.value() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(one.atoms[0].mass == 4.0);

  const auto s = levy_density_description(star());
  REQUIRE(s.atoms.size() == 1);
  CHECK_FALSE(s.atoms[0].location.is_finite());
  CHECK(s.atoms[0].mass == 1.0);
  CHECK(s.describe().find("infinity") != std::string::npos);

  // beta(3, 1): (1 - e^-y)^0 e^-y / B(3, 1) = 3 e^-y.
  const auto b = levy_density_description(beta(3.0, 1.0));
  CHECK(b.density(0.7) == doctest::Approx(3.0 * std::exp(-0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(levy_density_description(kingman()), Error);
}
