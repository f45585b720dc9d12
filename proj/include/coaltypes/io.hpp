#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coaltypes/exact.hpp"
#include "coaltypes/measure.hpp"
#include "coaltypes/rates.hpp"
#include "coaltypes/rational.hpp"

namespace coaltypes {

// Measure files are JSON objects:
//   {"kind": "lambda", "kingman_mass": 0, "star_mass": 0,
//    "beta": [{"a": 2, "b": 1, "weight": 1}], "atoms": [{"u": 0.5, "weight": 1}]}
//   {"kind": "xi", "kingman_mass": 0, "atoms": [{"x": [0.5, 0.5], "weight": 1}]}
// Missing masses default to 0 and missing weights to 1. Unknown keys are errors.
Measure parse_measure(std::string_view json_text);
Measure load_measure(const std::string& path);
std::string measure_to_json(const Measure& m);

// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

// Key/value pairs echoed as a comment line at the top of every artifact.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

std::string version_string();
void write_config_header(std::ostream& out, const ConfigEcho& config);

void write_rates_csv(std::ostream& out, const RateTable& t);
void write_totals_csv(std::ostream& out, const RateTable& t);
void write_distribution_csv(std::ostream& out, const TypeDistribution& d);
void write_rational_distribution_csv(std::ostream& out, const RationalDistribution& d);
void write_moments_csv(std::ostream& out, const FactorialMoments& fm);

}  // namespace coaltypes
