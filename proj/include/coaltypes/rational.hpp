#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "coaltypes/measure.hpp"

namespace coaltypes {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kRationalMaxN = 30;

// Exact value of a finite double as a dyadic rational.
Rational exact_rational(double v);

// The type-count recursion in exact rational arithmetic, for measures whose
// rates are rational in their inputs (Kingman and star masses, point atoms,
// finite simplex atoms). Every double input is taken at its exact binary value.
struct RationalDistribution {
  int n = 0;
  std::vector<std::vector<Rational>> p;  // p[m][k]
};

RationalDistribution exact_rational_distribution(const Measure& m, double r, int n);

}  // namespace coaltypes
