#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace coaltypes {

// A nonnegative real that may be +infinity. Infinite integrals are carried as a
// distinct state so that they cannot leak into arithmetic; value() refuses them.
class ExtendedReal {
 public:
  ExtendedReal() : value_(0.0) {}
  explicit ExtendedReal(double v) : value_(v) {}
  static ExtendedReal infinite() { return ExtendedReal(std::nullopt); }

  bool is_finite() const { return value_.has_value(); }
  double value() const;
  std::string str() const;

  friend ExtendedReal operator+(ExtendedReal lhs, ExtendedReal rhs);
  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  explicit ExtendedReal(std::optional<double> v) : value_(v) {}
  std::optional<double> value_;
};

// Weighted beta(a, b) density on (0, 1), weight * u^(a-1) (1-u)^(b-1) / B(a, b).
struct BetaComponent {
  double a = 1.0;
  double b = 1.0;
  double weight = 1.0;
};

// Point mass of size `weight` at u in (0, 1).
struct PointAtom {
  double u = 0.5;
  double weight = 1.0;
};

// Characterizing measure of a coalescent with multiple collisions on [0, 1]:
// mass at 0 (Kingman part), mass at 1 (star part), beta densities and atoms.
struct LambdaSpec {
  double kingman_mass = 0.0;
  double star_mass = 0.0;
  std::vector<BetaComponent> beta;
  std::vector<PointAtom> atoms;
};

// Point of the infinite simplex with finite support, x_1 >= x_2 >= ... > 0.
struct SimplexAtom {
  std::vector<double> x;
  double weight = 1.0;

  double size() const;        // |x|
  double self_inner() const;  // (x, x)
  double dust() const;        // max(0, 1 - |x|)
};

// Measure on the simplex with simultaneous multiple collisions: Kingman mass at
// zero plus finitely many finite-support atoms.
struct XiSpec {
  double kingman_mass = 0.0;
  std::vector<SimplexAtom> atoms;
};

enum class MeasureKind { Lambda, Xi };

// A validated characterizing measure. Construct only through validate().
class Measure {
 public:
  static Measure validate(LambdaSpec spec);
  static Measure validate(XiSpec spec);

  MeasureKind kind() const;
  const LambdaSpec& lambda() const;
  const XiSpec& xi() const;

  double kingman_mass() const;
  double total_mass() const;

  // Lambda measures without beta densities map to Xi measures by sending the
  // atom at u to the one-coordinate point (u) and the star mass to (1).
  bool embeddable_as_xi() const;
  Measure as_xi() const;

 private:
  explicit Measure(std::variant<LambdaSpec, XiSpec> spec) : spec_(std::move(spec)) {}
  std::variant<LambdaSpec, XiSpec> spec_;
};

struct ConditionReport {
  bool proper_freq_condition = false;  // no mass at zero and h1 finite
  bool simple_condition = false;       // no mass at zero and m0 finite
  ExtendedReal h1;                     // integral of |x| / (x, x)
  ExtendedReal m0;                     // integral of 1 / (x, x)
};

ConditionReport condition_report(const Measure& m);

// Throws ConditionViolated naming the failed condition unless the measure has no
// mass at zero and a finite integral of |x|/(x,x).
void require_proper_frequency_condition(const Measure& m, const char* operation);
void require_simple_condition(const Measure& m, const char* operation);

// Laplace exponent of the subordinator -log(singleton frequency):
//   Phi(eta) = int (1 - (1 - |x|)^eta) Xi(dx) / (x, x).
// Integer eta on beta densities uses closed Beta-function sums; other eta use
// quadrature.
double laplace_exponent(const Measure& m, double eta);

// int |x|^2 / (x, x) Xi(dx), evaluated directly from the measure (equals
// 2 Phi(1) - Phi(2)).
double squared_size_integral(const Measure& m);

// Levy measure of the subordinator: image of Xi(dx)/(x,x) under
// x -> -log(1 - |x|).
struct LevyAtom {
  ExtendedReal location;
  double mass = 0.0;
};

// Density y -> weight / B(a,b) * (1 - e^-y)^(a-3) * e^(-b y) on (0, inf).
struct LevyDensityTerm {
  double a = 0.0;
  double b = 0.0;
  double weight = 0.0;
};

struct LevyDescription {
  std::vector<LevyAtom> atoms;
  std::vector<LevyDensityTerm> densities;

  double density(double y) const;
  std::string describe() const;
};

LevyDescription levy_density_description(const Measure& m);

}  // namespace coaltypes
