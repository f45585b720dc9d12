#include "coaltypes/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "coaltypes/errors.hpp"
#include "coaltypes/special.hpp"
#include "quadrature.hpp"

namespace coaltypes {

namespace {

constexpr double kSimplexSlack = 1e-12;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonfiniteMass, std::string(what) + " is not finite");
}

void check_nonnegative(double v, const char* what) {
  check_finite(v, what);
  if (v < 0.0) throw Error(ErrorCode::NegativeWeight, std::string(what) + " is negative");
}

void check_total(double total) {
  if (!std::isfinite(total) || !(total > 0.0)) {
    throw Error(ErrorCode::NonfiniteMass, "total mass must be finite and strictly positive");
  }
}

// B(a - shift, b) / B(a, b) for the beta moment integrals.
double beta_ratio(double a, double b, double shift) {
  return std::exp(special::log_beta(a - shift, b) - special::log_beta(a, b));
}

// int (1 - (1-u)^eta) u^-2 Beta(a,b)(du) for integer eta, as the positive sum
// sum_{m<eta} B(a-1, b+m) / B(a, b).
double beta_phi_integer(const BetaComponent& c, int eta) {
  double term = (c.a + c.b - 1.0) / (c.a - 1.0);
  double sum = 0.0;
  for (int m = 0; m < eta; ++m) {
    sum += term;
    term *= (c.b + m) / (c.a - 1.0 + c.b + m);
  }
  return sum;
}

double beta_phi(const BetaComponent& c, double eta) {
  const double rounded = std::round(eta);
  if (rounded == eta && eta <= 1e6) return beta_phi_integer(c, static_cast<int>(rounded));
  return detail::beta_laplace_integral(eta, c.a, c.b) / std::exp(special::log_beta(c.a, c.b));
}

}  // namespace

double ExtendedReal::value() const {
  if (!value_) throw Error(ErrorCode::ConditionViolated, "value of an infinite integral requested");
  return *value_;
}

std::string ExtendedReal::str() const {
  if (!value_) return "infinity";
  std::ostringstream os;
  os.precision(17);
  os << *value_;
  return os.str();
}

ExtendedReal operator+(ExtendedReal lhs, ExtendedReal rhs) {
  if (!lhs.is_finite() || !rhs.is_finite()) return ExtendedReal::infinite();
  return ExtendedReal(*lhs.value_ + *rhs.value_);
}

double SimplexAtom::size() const { return std::accumulate(x.begin(), x.end(), 0.0); }

double SimplexAtom::self_inner() const {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

double SimplexAtom::dust() const { return std::max(0.0, 1.0 - size()); }

Measure Measure::validate(LambdaSpec spec) {
  check_nonnegative(spec.kingman_mass, "kingman_mass");
  check_nonnegative(spec.star_mass, "star_mass");
  double total = spec.kingman_mass + spec.star_mass;
  for (const auto& c : spec.beta) {
    check_finite(c.a, "beta parameter a");
    check_finite(c.b, "beta parameter b");
    if (!(c.a > 0.0) || !(c.b > 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "beta parameters must be positive");
    }
    check_nonnegative(c.weight, "beta weight");
    total += c.weight;
  }
  for (const auto& atom : spec.atoms) {
    check_finite(atom.u, "atom location");
    if (!(atom.u > 0.0 && atom.u < 1.0)) {
      throw Error(ErrorCode::InvalidParameter, "atom location must lie in (0, 1)");
    }
    check_nonnegative(atom.weight, "atom weight");
    if (atom.weight == 0.0) throw Error(ErrorCode::NegativeWeight, "atom weight must be positive");
    total += atom.weight;
  }
  check_total(total);
  std::vector<double> locations;
  for (const auto& atom : spec.atoms) locations.push_back(atom.u);
  std::sort(locations.begin(), locations.end());
  if (std::adjacent_find(locations.begin(), locations.end()) != locations.end()) {
    throw Error(ErrorCode::DuplicateAtom, "atom locations must be pairwise distinct");
  }
  return Measure(std::move(spec));
}

Measure Measure::validate(XiSpec spec) {
  check_nonnegative(spec.kingman_mass, "kingman_mass");
  double total = spec.kingman_mass;
  for (const auto& atom : spec.atoms) {
    if (atom.x.empty()) throw Error(ErrorCode::SimplexViolation, "simplex atom has no coordinates");
    for (std::size_t i = 0; i < atom.x.size(); ++i) {
      check_finite(atom.x[i], "simplex coordinate");
      if (!(atom.x[i] > 0.0)) {
        throw Error(ErrorCode::SimplexViolation, "simplex coordinates must be positive");
      }
      if (i > 0 && atom.x[i] > atom.x[i - 1]) {
        throw Error(ErrorCode::SimplexViolation, "simplex coordinates must be nonincreasing");
      }
    }
    if (atom.size() > 1.0 + kSimplexSlack) {
      throw Error(ErrorCode::SimplexViolation, "simplex atom has |x| > 1");
    }
    check_nonnegative(atom.weight, "atom weight");
    if (atom.weight == 0.0) throw Error(ErrorCode::NegativeWeight, "atom weight must be positive");
    total += atom.weight;
  }
  check_total(total);
  for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.atoms.size(); ++j) {
      if (spec.atoms[i].x == spec.atoms[j].x) {
        throw Error(ErrorCode::DuplicateAtom, "simplex atoms must be pairwise distinct");
      }
    }
  }
  return Measure(std::move(spec));
}

MeasureKind Measure::kind() const {
  return std::holds_alternative<LambdaSpec>(spec_) ? MeasureKind::Lambda : MeasureKind::Xi;
}

const LambdaSpec& Measure::lambda() const {
  if (kind() != MeasureKind::Lambda) throw Error(ErrorCode::InvalidArgument, "measure is not a Lambda measure");
  return std::get<LambdaSpec>(spec_);
}

const XiSpec& Measure::xi() const {
  if (kind() != MeasureKind::Xi) throw Error(ErrorCode::InvalidArgument, "measure is not a Xi measure");
  return std::get<XiSpec>(spec_);
}

double Measure::kingman_mass() const {
  return kind() == MeasureKind::Lambda ? lambda().kingman_mass : xi().kingman_mass;
}

double Measure::total_mass() const {
  if (kind() == MeasureKind::Xi) {
    double total = xi().kingman_mass;
    for (const auto& a : xi().atoms) total += a.weight;
    return total;
  }
  const auto& l = lambda();
  double total = l.kingman_mass + l.star_mass;
  for (const auto& c : l.beta) total += c.weight;
  for (const auto& a : l.atoms) total += a.weight;
  return total;
}

bool Measure::embeddable_as_xi() const {
  if (kind() == MeasureKind::Xi) return true;
  return std::all_of(lambda().beta.begin(), lambda().beta.end(),
                     [](const BetaComponent& c) { return c.weight == 0.0; });
}

Measure Measure::as_xi() const {
  if (kind() == MeasureKind::Xi) return *this;
  if (!embeddable_as_xi()) {
    throw Error(ErrorCode::UnsupportedMeasure, "beta densities have no finite-atom simplex form");
  }
  const auto& l = lambda();
  XiSpec out;
  out.kingman_mass = l.kingman_mass;
  if (l.star_mass > 0.0) out.atoms.push_back({{1.0}, l.star_mass});
  for (const auto& a : l.atoms) out.atoms.push_back({{a.u}, a.weight});
  return validate(std::move(out));
}

ConditionReport condition_report(const Measure& m) {
  ConditionReport report;
  if (m.kind() == MeasureKind::Xi) {
    double h1 = 0.0;
    double m0 = 0.0;
    for (const auto& a : m.xi().atoms) {
      h1 += a.weight * a.size() / a.self_inner();
      m0 += a.weight / a.self_inner();
    }
    report.h1 = ExtendedReal(h1);
    report.m0 = ExtendedReal(m0);
  } else {
    const auto& l = m.lambda();
    ExtendedReal h1(l.star_mass);
    ExtendedReal m0(l.star_mass);
    for (const auto& c : l.beta) {
      if (c.weight == 0.0) continue;
      h1 = h1 + (c.a > 1.0 ? ExtendedReal(c.weight * beta_ratio(c.a, c.b, 1.0)) : ExtendedReal::infinite());
      m0 = m0 + (c.a > 2.0 ? ExtendedReal(c.weight * beta_ratio(c.a, c.b, 2.0)) : ExtendedReal::infinite());
    }
    for (const auto& a : l.atoms) {
      h1 = h1 + ExtendedReal(a.weight / a.u);
      m0 = m0 + ExtendedReal(a.weight / (a.u * a.u));
    }
    report.h1 = h1;
    report.m0 = m0;
  }
  if (m.kingman_mass() > 0.0) {
    report.h1 = ExtendedReal::infinite();
    report.m0 = ExtendedReal::infinite();
  }
  report.proper_freq_condition = m.kingman_mass() == 0.0 && report.h1.is_finite();
  report.simple_condition = m.kingman_mass() == 0.0 && report.m0.is_finite();
  return report;
}

void require_proper_frequency_condition(const Measure& m, const char* operation) {
  const auto report = condition_report(m);
  if (report.proper_freq_condition) return;
  std::string why = m.kingman_mass() > 0.0 ? "the measure has mass at zero"
                                           : "the integral of |x|/(x,x) diverges";
  const char* condition = m.kind() == MeasureKind::Lambda
                              ? "Lambda({0}) = 0 and int u^-1 Lambda(du) < inf"
                              : "Xi({0}) = 0 and int |x|/(x,x) Xi(dx) < inf";
  throw Error(ErrorCode::ConditionViolated,
              std::string(operation) + " requires the no-proper-frequencies condition " +
                  condition + "; " + why);
}

void require_simple_condition(const Measure& m, const char* operation) {
  const auto report = condition_report(m);
  if (report.simple_condition) return;
  std::string why = m.kingman_mass() > 0.0 ? "the measure has mass at zero"
                                           : "m0 = int Xi(dx)/(x,x) is infinite";
  throw Error(ErrorCode::ConditionViolated,
              std::string(operation) +
                  " requires a simple measure, Xi({0}) = 0 and int Xi(dx)/(x,x) < inf; " + why);
}

double laplace_exponent(const Measure& m, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::InvalidArgument, "Laplace exponent needs a finite eta >= 0");
  }
  require_proper_frequency_condition(m, "laplace_exponent");
  if (eta == 0.0) return 0.0;
  double phi = 0.0;
  if (m.kind() == MeasureKind::Xi) {
    for (const auto& a : m.xi().atoms) {
      phi += a.weight * special::one_minus_pow(std::min(1.0, a.size()), eta) / a.self_inner();
    }
    return phi;
  }
  const auto& l = m.lambda();
  phi += l.star_mass;
  for (const auto& a : l.atoms) phi += a.weight * special::one_minus_pow(a.u, eta) / (a.u * a.u);
  for (const auto& c : l.beta) {
    if (c.weight > 0.0) phi += c.weight * beta_phi(c, eta);
  }
  return phi;
}

double squared_size_integral(const Measure& m) {
  require_proper_frequency_condition(m, "squared_size_integral");
  if (m.kind() == MeasureKind::Xi) {
    double sum = 0.0;
    for (const auto& a : m.xi().atoms) sum += a.weight * a.size() * a.size() / a.self_inner();
    return sum;
  }
  // For one-coordinate points |x|^2 = (x,x), so the integral is the mass on (0,1].
  return m.total_mass() - m.kingman_mass();
}

double LevyDescription::density(double y) const {
  if (!(y > 0.0)) return 0.0;
  double sum = 0.0;
  for (const auto& d : densities) {
    sum += d.weight * std::exp((d.a - 3.0) * std::log(-std::expm1(-y)) - d.b * y -
                               special::log_beta(d.a, d.b));
  }
  return sum;
}

std::string LevyDescription::describe() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& a : atoms) {
    os << "point mass " << a.mass << " at y = " << a.location.str() << "\n";
  }
  for (const auto& d : densities) {
    os << "density y -> " << d.weight << " / B(" << d.a << ", " << d.b << ") * (1 - exp(-y))^("
       << d.a - 3.0 << ") * exp(-" << d.b << " y) on (0, infinity)\n";
  }
  return os.str();
}

LevyDescription levy_density_description(const Measure& m) {
  require_proper_frequency_condition(m, "levy_density_description");
  LevyDescription out;
  const auto location = [](double size) {
    return size >= 1.0 ? ExtendedReal::infinite() : ExtendedReal(-std::log1p(-size));
  };
  if (m.kind() == MeasureKind::Xi) {
    for (const auto& a : m.xi().atoms) {
      out.atoms.push_back({location(a.size()), a.weight / a.self_inner()});
    }
    return out;
  }
  const auto& l = m.lambda();
  if (l.star_mass > 0.0) out.atoms.push_back({ExtendedReal::infinite(), l.star_mass});
  for (const auto& a : l.atoms) out.atoms.push_back({location(a.u), a.weight / (a.u * a.u)});
  for (const auto& c : l.beta) {
    if (c.weight > 0.0) out.densities.push_back({c.a, c.b, c.weight});
  }
  return out;
}

}  // namespace coaltypes
