#include <doctest.h>

#include <sstream>

#include "coaltypes/errors.hpp"
#include "coaltypes/io.hpp"
#include "support.hpp"

using namespace coaltypes;
using namespace testing;

namespace {

ErrorCode parse_code(const std::string& text) {
  try {
    parse_measure(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error for " << text);
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("measure files") {
  SUBCASE("lambda with every field") {
    const auto m = parse_measure(R"({"kind": "lambda", "kingman_mass": 0.5, "star_mass": 0.25,
        "beta": [{"a": 2, "b": 1, "weight": 3}], "atoms": [{"u": 0.5, "weight": 1}]})");
    CHECK(m.kind() == MeasureKind::Lambda);
    CHECK(m.lambda().kingman_mass == 0.5);
    CHECK(m.lambda().star_mass == 0.25);
    CHECK(m.lambda().beta[0].weight == 3.0);
    CHECK(m.lambda().atoms[0].u == 0.5);
    CHECK(m.total_mass() == 4.75);
  }
  SUBCASE("xi") {
    const auto m = parse_measure(R"({"kind": "xi", "atoms": [{"x": [0.5, 0.5], "weight": 1}]})");
    CHECK(m.xi().atoms[0].x == std::vector<double>{0.5, 0.5});
    CHECK(m.xi().kingman_mass == 0.0);
  }
  SUBCASE("round trip") {
    for (const auto& m : {lambda_mixture(), xi_mixture(), kingman()}) {
      const auto again = parse_measure(measure_to_json(m));
      CHECK(measure_to_json(again) == measure_to_json(m));
    }
  }
  SUBCASE("errors") {
    CHECK(parse_code("{not json") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"kingman_mass": 1})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"kind": "theta", "kingman_mass": 1})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"kind": "lambda", "kingman_mass": "1"})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"kind": "lambda", "kingman": 1})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"kind": "lambda", "beta": [{"a": 2}]})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"kind": "xi", "atoms": [{"x": [0.5, 0.6]}]})") == ErrorCode::SimplexViolation);
    CHECK(parse_code(R"({"kind": "lambda", "star_mass": -1, "kingman_mass": 2})") == ErrorCode::NegativeWeight);
    CHECK(parse_code(R"({"kind": "lambda"})") == ErrorCode::NonfiniteMass);
    CHECK_THROWS_AS(load_measure("/nonexistent/measure.json"), Error);
  }
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.755731922398589e-07, 1e300, 0.0, 5.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(3.0) == "3");
}

TEST_CASE("CSV layouts") {
  const auto t = build_rate_table(dirac_half_half(), 3);
  std::ostringstream rates;
  write_rates_csv(rates, t);
  CHECK(rates.str() == "m,k,g_mk,r_mk\n2,1,1,1\n3,1,0.5,0.25\n3,2,1.5,0.75\n");

  std::ostringstream header;
  write_config_header(header, {{"n", "3"}});
  CHECK(header.str() == "# coaltypes " + version_string() + " n=3\n");

  const auto d = type_distribution(build_rate_table(kingman(), 3), 0.5, 3);
  std::ostringstream dist;
  write_distribution_csv(dist, d);
  std::istringstream lines(dist.str());
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == 1 + 6);

  std::ostringstream mom;
  write_moments_csv(mom, d.moments);
  CHECK(mom.str().rfind("m,j,value\n1,1,1\n", 0) == 0);
}
