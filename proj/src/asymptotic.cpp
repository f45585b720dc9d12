#include "coaltypes/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "coaltypes/errors.hpp"
#include "coaltypes/special.hpp"
#include "coaltypes/stats.hpp"

namespace coaltypes {

namespace {

SimpleParams simple_params(const Measure& m, double r) {
  SimpleParams p;
  std::vector<ALawComponent> parts;
  double total = 0.0;
  auto add_point = [&](double mass, double a_value) {
    if (mass <= 0.0) return;
    ALawComponent c;
    c.probability = mass;
    c.point = a_value;
    parts.push_back(c);
    total += mass;
  };
  if (m.kind() == MeasureKind::Xi) {
    for (const auto& a : m.xi().atoms) add_point(a.weight / a.self_inner(), a.dust());
  } else {
    const auto& l = m.lambda();
    add_point(l.star_mass, 0.0);
    for (const auto& a : l.atoms) add_point(a.weight / (a.u * a.u), 1.0 - a.u);
    for (const auto& c : l.beta) {
      if (c.weight <= 0.0) continue;
      ALawComponent part;
      part.probability =
          c.weight * std::exp(special::log_beta(c.a - 2.0, c.b) - special::log_beta(c.a, c.b));
      part.beta_a = c.a - 2.0;
      part.beta_b = c.b;
      parts.push_back(part);
      total += part.probability;
    }
  }
  for (auto& c : parts) c.probability /= total;
  p.m0 = total;
  p.b_shape = total / r;
  p.a_law = std::move(parts);
  return p;
}

double draw_beta(Rng& rng, double a, double b) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  if (x + y == 0.0) return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < a / (a + b) ? 1.0 : 0.0;
  return x / (x + y);
}

}  // namespace

std::string SimpleParams::describe_a_law() const {
  std::ostringstream out;
  out.precision(12);
  for (std::size_t i = 0; i < a_law.size(); ++i) {
    const auto& c = a_law[i];
    if (i) out << "; ";
    if (c.point) {
      out << "A = " << *c.point;
    } else {
      out << "1 - A ~ Beta(" << c.beta_a << ", " << c.beta_b << ")";
    }
    out << " with probability " << c.probability;
  }
  return out.str();
}

std::vector<double> limit_moments(std::span<const double> phi, double r) {
  std::vector<double> moments(phi.size(), 0.0);
  if (phi.empty()) return moments;
  moments[0] = 1.0;
  for (std::size_t j = 1; j < phi.size(); ++j) {
    moments[j] = moments[j - 1] * (static_cast<double>(j) * r) / (static_cast<double>(j) * r + phi[j]);
  }
  return moments;
}

LimitLaw limit_law(const Measure& m, double r, int j_max) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "mutation rate must be positive");
  if (j_max < 2) throw Error(ErrorCode::InvalidArgument, "limit law needs j_max >= 2");
  require_proper_frequency_condition(m, "limit_law");
  LimitLaw law;
  law.r = r;
  law.j_max = j_max;
  law.phi.assign(static_cast<std::size_t>(j_max) + 1, 0.0);
  for (int j = 1; j <= j_max; ++j) law.phi[j] = laplace_exponent(m, j);
  law.moments = limit_moments(law.phi, r);
  law.squared_size = squared_size_integral(m);
  const double d1 = r + law.phi[1];
  law.variance = r * r / (d1 * d1 * (2.0 * r + law.phi[2])) * law.squared_size;
  if (condition_report(m).simple_condition) law.simple = simple_params(m, r);
  return law;
}

double hausdorff_min_difference(std::span<const double> moments, int k_max, int m_max) {
  const int top = static_cast<int>(moments.size()) - 1;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max && k <= top; ++k) {
    for (int mm = 0; mm <= m_max && k + mm <= top; ++mm) {
      double sum = 0.0;
      double binom = 1.0;
      for (int i = 0; i <= mm; ++i) {
        sum += (i % 2 ? -binom : binom) * moments[k + i];
        binom = binom * (mm - i) / (i + 1);
      }
      worst = std::min(worst, sum);
    }
  }
  return worst;
}

FixedPointSampler::FixedPointSampler(const Measure& m, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "mutation rate must be positive");
  require_simple_condition(m, "fixed_point_sample");
  params_ = simple_params(m, r);
}

double FixedPointSampler::draw_a(Rng& rng) const {
  const auto& parts = params_.a_law;
  std::size_t pick = parts.size() - 1;
  if (parts.size() > 1) {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (u < parts[i].probability) {
        pick = i;
        break;
      }
      u -= parts[i].probability;
    }
  }
  const auto& c = parts[pick];
  if (c.point) return *c.point;
  return 1.0 - draw_beta(rng, c.beta_a, c.beta_b);
}

double FixedPointSampler::draw_b(Rng& rng) const {
  // P(B > x) = (1 - x)^(m0/r), so B = 1 - U^(r/m0).
  const double u = 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);  // (0, 1]
  return -std::expm1(std::log(u) / params_.b_shape);
}

FixedPointSampler::Draw FixedPointSampler::draw_m(Rng& rng, double epsilon) const {
  Draw d;
  double product = 1.0;
  for (;;) {
    const double b = draw_b(rng);
    d.value += product * b;
    ++d.terms;
    product *= (1.0 - b) * draw_a(rng);
    if (product < epsilon || product == 0.0) break;
  }
  d.truncation_bound = product;
  return d;
}

FixedPointSample fixed_point_sample(const Measure& m, double r, std::uint64_t seed, std::size_t count,
                                    double epsilon, unsigned threads) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::BadEpsilon, "epsilon must lie in (0, 1]");
  }
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  const FixedPointSampler sampler(m, r);
  FixedPointSample out;
  out.seed = seed;
  out.epsilon = epsilon;
  out.values.assign(count, 0.0);
  const std::size_t chunks = chunk_count(count);
  std::vector<double> bound(chunks, 0.0);
  std::vector<long long> terms(chunks, 0);
  std::vector<int> max_terms(chunks, 0);
  for_each_chunk(count, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = replicate_stream(seed, i);
      const auto d = sampler.draw_m(rng, epsilon);
      out.values[i] = d.value;
      bound[c] = std::max(bound[c], d.truncation_bound);
      terms[c] += d.terms;
      max_terms[c] = std::max(max_terms[c], d.terms);
    }
  });
  long long total_terms = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    out.max_truncation_bound = std::max(out.max_truncation_bound, bound[c]);
    out.max_terms = std::max(out.max_terms, max_terms[c]);
    total_terms += terms[c];
  }
  out.mean_terms = static_cast<double>(total_terms) / static_cast<double>(count);
  return out;
}

std::vector<MomentDiscrepancy> moment_check(std::span<const double> samples, const LimitLaw& law, int j_max) {
  if (j_max > law.j_max) throw Error(ErrorCode::InvalidArgument, "moment order exceeds the limit law's j_max");
  std::vector<MomentDiscrepancy> report;
  for (int j = 0; j <= j_max; ++j) {
    MomentDiscrepancy d;
    d.j = j;
    d.analytic = law.moments[j];
    stats::RunningMoments acc;
    for (double x : samples) acc.add(std::pow(x, j));
    d.empirical = acc.mean;
    if (acc.count > 0) d.std_error = std::sqrt(acc.variance() / static_cast<double>(acc.count));
    if (d.std_error > 0.0) d.z = (d.empirical - d.analytic) / d.std_error;
    report.push_back(d);
  }
  return report;
}

}  // namespace coaltypes
