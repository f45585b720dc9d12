#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coaltypes/measure.hpp"
#include "coaltypes/rng.hpp"

namespace coaltypes {

// One mixture component of the law of A = 1 - |x| under the normalized
// measure Xi(dx) / ((x,x) m0): either a point mass at A = point or a law with
// 1 - A ~ Beta(beta_a, beta_b).
struct ALawComponent {
  double probability = 0.0;
  std::optional<double> point;
  double beta_a = 0.0;
  double beta_b = 0.0;
};

struct SimpleParams {
  double m0 = 0.0;
  double b_shape = 0.0;  // B ~ Beta(1, m0 / r)
  std::vector<ALawComponent> a_law;

  std::string describe_a_law() const;
};

// Limit law of K_n / n for measures without proper frequencies.
struct LimitLaw {
  double r = 0.0;
  int j_max = 0;
  std::vector<double> phi;      // phi[j] = Phi(j), phi[0] = 0
  std::vector<double> moments;  // moments[j] = E(K^j), moments[0] = 1
  double variance = 0.0;        // from the closed variance identity
  double squared_size = 0.0;    // int |x|^2 / (x,x) Xi(dx)
  std::optional<SimpleParams> simple;
};

// E(K^j) = r^j j! / prod_{i<=j} (i r + Phi(i)), built as a running product.
std::vector<double> limit_moments(std::span<const double> phi, double r);

LimitLaw limit_law(const Measure& m, double r, int j_max);

// Smallest value of sum_i (-1)^i C(mm, i) moments[k + i] over k + mm <= size-1,
// k <= k_max, mm <= m_max. A [0,1] moment sequence keeps this nonnegative.
double hausdorff_min_difference(std::span<const double> moments, int k_max, int m_max);

// Draws of (A, B) for the fixed-point equation M = B + A (1 - B) M.
class FixedPointSampler {
 public:
  FixedPointSampler(const Measure& m, double r);

  double draw_a(Rng& rng) const;
  double draw_b(Rng& rng) const;

  // One draw of M from the series sum_i B_i prod_{j<i} A_j (1 - B_j), stopped
  // once the running product drops below epsilon.
  struct Draw {
    double value = 0.0;
    double truncation_bound = 0.0;  // the final running product, >= M - value
    int terms = 0;
  };
  Draw draw_m(Rng& rng, double epsilon) const;

  const SimpleParams& params() const { return params_; }

 private:
  SimpleParams params_;
};

struct FixedPointSample {
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::vector<double> values;
  double max_truncation_bound = 0.0;
  double mean_terms = 0.0;
  int max_terms = 0;
};

inline constexpr double kDefaultEpsilon = 1e-12;

FixedPointSample fixed_point_sample(const Measure& m, double r, std::uint64_t seed, std::size_t count,
                                    double epsilon = kDefaultEpsilon, unsigned threads = 0);

struct MomentDiscrepancy {
  int j = 0;
  double empirical = 0.0;
  double analytic = 0.0;
  double std_error = 0.0;
  double z = 0.0;  // (empirical - analytic) / std_error, 0 when std_error is 0
};

std::vector<MomentDiscrepancy> moment_check(std::span<const double> samples, const LimitLaw& law, int j_max);

}  // namespace coaltypes
