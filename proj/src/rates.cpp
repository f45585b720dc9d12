#include "coaltypes/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coaltypes/errors.hpp"
#include "coaltypes/special.hpp"

namespace coaltypes {

namespace {

constexpr int kPaintboxCeiling = 1000;

double pairs(int m) { return 0.5 * m * (m - 1.0); }

void check_rows_m(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "rates are defined from m = 2 blocks on");
}

void add_lambda_row(const LambdaSpec& l, int m, std::vector<double>& row) {
  row[m - 1] += l.kingman_mass * pairs(m);
  row[1] += l.star_mass;
  for (const auto& c : l.beta) {
    if (c.weight == 0.0) continue;
    const double lb = special::log_beta(c.a, c.b);
    for (int k = 1; k < m; ++k) {
      const double x = m - k + c.a - 1.0;
      if (!(x > 0.0)) {
        throw Error(ErrorCode::DivergentRate, "beta rate integral diverges at m = " +
                                                  std::to_string(m) + ", k = " + std::to_string(k));
      }
      row[k] += c.weight * std::exp(special::log_binomial(m, k - 1) +
                                    special::log_beta(x, k + c.b - 1.0) - lb);
    }
  }
  for (const auto& a : l.atoms) {
    const double lu = std::log(a.u);
    const double lq = std::log1p(-a.u);
    for (int k = 1; k < m; ++k) {
      row[k] += a.weight * std::exp(special::log_binomial(m, k - 1) + (m - k - 1) * lu + (k - 1) * lq);
    }
  }
}

// Terms B(a, b + l) / B(a, b) for l = 0, 1, ...
class BetaShiftTerms {
 public:
  BetaShiftTerms(double a, double b) : a_(a), b_(b) {}
  double next() {
    const double out = term_;
    term_ *= (b_ + l_) / (a_ + b_ + l_);
    ++l_;
    return out;
  }

 private:
  double a_, b_;
  double term_ = 1.0;
  int l_ = 0;
};

// Elementary symmetric polynomials e_0..e_s of x.
std::vector<double> elementary_symmetric(const std::vector<double>& x) {
  std::vector<double> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += x[i] * e[j - 1];
  }
  return e;
}

// Probability that the paintbox puts two balls of n into a common box:
// 1 - dust^n - sum_j (n)_j e_j(x) dust^(n-j).
double paintbox_collision_probability(const SimplexAtom& atom, int n) {
  const double dust = atom.dust();
  const auto e = elementary_symmetric(atom.x);
  double no_collision = std::pow(dust, n);
  double falling = 1.0;
  for (int j = 1; j <= std::min<int>(n, static_cast<int>(atom.x.size())); ++j) {
    falling *= (n - j + 1);
    no_collision += falling * e[j] * std::pow(dust, n - j);
  }
  return 1.0 - no_collision;
}

// ((1-u)^m - 1 + m u) / u^2, extended continuously at u = 0.
double lambda_drop_kernel(int m, double u) {
  if (m * u > 0.5) return (m * u - special::one_minus_pow(u, m)) / (u * u);
  const double q = 1.0 - u;
  double power = 1.0;
  double sum = 0.0;
  for (int p = 0; p <= m - 2; ++p) {
    sum += (m - 1.0 - p) * power;
    power *= q;
  }
  return sum;
}

double lambda_total(const LambdaSpec& l, int m) {
  double total = l.kingman_mass * pairs(m) + l.star_mass;
  for (const auto& a : l.atoms) total += a.weight * special::binomial_tail2_over_sq(m, a.u);
  for (const auto& c : l.beta) {
    if (c.weight == 0.0) continue;
    BetaShiftTerms terms(c.a, c.b);
    double sum = 0.0;
    for (int l_ = 0; l_ <= m - 2; ++l_) sum += (l_ + 1.0) * terms.next();
    total += c.weight * sum;
  }
  return total;
}

double xi_total(const XiSpec& xi, int m) {
  double total = xi.kingman_mass * pairs(m);
  for (const auto& a : xi.atoms) {
    total += a.weight / a.self_inner() * paintbox_collision_probability(a, m);
  }
  return total;
}

ExtendedReal h_function(const Measure& measure, int m) {
  if (measure.kingman_mass() > 0.0) return ExtendedReal::infinite();
  if (measure.kind() == MeasureKind::Xi) {
    double h = 0.0;
    for (const auto& a : measure.xi().atoms) {
      double inner = 0.0;
      for (double xi : a.x) inner += special::one_minus_pow(xi, m);
      h += a.weight / a.self_inner() * inner;
    }
    return ExtendedReal(h);
  }
  const auto& l = measure.lambda();
  ExtendedReal h(l.star_mass);
  for (const auto& a : l.atoms) h = h + ExtendedReal(a.weight * special::one_minus_pow(a.u, m) / (a.u * a.u));
  for (const auto& c : l.beta) {
    if (c.weight == 0.0) continue;
    if (!(c.a > 1.0)) return ExtendedReal::infinite();
    // sum_{l<m} B(a-1, b+l) / B(a, b)
    double term = (c.a + c.b - 1.0) / (c.a - 1.0);
    double sum = 0.0;
    for (int l_ = 0; l_ < m; ++l_) {
      sum += term;
      term *= (c.b + l_) / (c.a - 1.0 + c.b + l_);
    }
    h = h + ExtendedReal(c.weight * sum);
  }
  return h;
}

// g(m) E(V_m): for one-coordinate points the internal-branch integrand equals
// the total-rate integrand, so Lambda measures reuse lambda_total.
double internal_branch_integral(const Measure& measure, int m) {
  if (measure.kind() == MeasureKind::Lambda) return lambda_total(measure.lambda(), m);
  const auto& xi = measure.xi();
  double sum = xi.kingman_mass * pairs(m);
  for (const auto& a : xi.atoms) {
    double inner = 0.0;
    for (double x : a.x) inner += x * x * special::binomial_tail2_over_sq(m, x);
    sum += a.weight / a.self_inner() * inner;
  }
  return sum;
}

}  // namespace

double RateTable::g(int m, int k) const {
  if (m < 2 || m > n_max_) throw Error(ErrorCode::RateTableTooSmall, "row " + std::to_string(m) + " not in table");
  return (k < 1 || k >= m) ? 0.0 : g_[m][k];
}

double RateTable::total(int m) const {
  if (m < 2 || m > n_max_) throw Error(ErrorCode::RateTableTooSmall, "row " + std::to_string(m) + " not in table");
  return total_[m];
}

double RateTable::jump(int m, int k) const {
  if (m < 2 || m > n_max_) throw Error(ErrorCode::RateTableTooSmall, "row " + std::to_string(m) + " not in table");
  return (k < 1 || k >= m) ? 0.0 : jump_[m][k];
}

double RateTable::row_sum(int m) const {
  const auto r = row(m);
  double sum = 0.0;
  for (double v : r) sum += v;
  return sum;
}

std::span<const double> RateTable::row(int m) const {
  if (m < 2 || m > n_max_) throw Error(ErrorCode::RateTableTooSmall, "row " + std::to_string(m) + " not in table");
  return g_[m];
}

std::span<const double> RateTable::jump_row(int m) const {
  if (m < 2 || m > n_max_) throw Error(ErrorCode::RateTableTooSmall, "row " + std::to_string(m) + " not in table");
  return jump_[m];
}

PaintboxBlockLaw::PaintboxBlockLaw(std::span<const double> x, int n_max)
    : x_(x.begin(), x.end()), n_max_(n_max), binom_(std::clamp(n_max, 0, kPaintboxCeiling)) {
  if (n_max < 0 || n_max > kPaintboxCeiling) {
    throw Error(ErrorCode::TableTooLarge, "paintbox law supports at most " +
                                              std::to_string(kPaintboxCeiling) + " balls");
  }
  double size = 0.0;
  for (double v : x_) size += v;
  dust_ = std::max(0.0, 1.0 - size);

  const int s = static_cast<int>(x_.size());
  const auto& binom = binom_;
  scaled_.assign(static_cast<std::size_t>(n_max) + 1, std::vector<double>(s + 1, 0.0));
  scaled_[0][0] = 1.0;
  std::vector<double> powers(static_cast<std::size_t>(n_max) + 1);
  for (int i = 0; i < s; ++i) {
    powers[0] = 1.0;
    for (int t = 1; t <= n_max; ++t) powers[t] = powers[t - 1] * x_[i];
    auto next = scaled_;
    for (int u = 1; u <= n_max; ++u) {
      for (int j = 1; j <= i + 1; ++j) {
        double add = 0.0;
        for (int t = 1; t <= u; ++t) add += binom(u, t) * powers[t] * scaled_[u - t][j - 1];
        next[u][j] += add;
      }
    }
    scaled_ = std::move(next);
  }
}

std::vector<double> PaintboxBlockLaw::block_count_law(int n) const {
  if (n < 0 || n > n_max_) throw Error(ErrorCode::InvalidArgument, "ball count outside the paintbox table");
  const int s = static_cast<int>(x_.size());
  std::vector<double> law(static_cast<std::size_t>(n) + 1, 0.0);
  const auto& binom = binom_;
  for (int d = 0; d <= n; ++d) {
    const double dust_weight = binom(n, d) * std::pow(dust_, d);
    if (dust_weight == 0.0) continue;
    for (int j = 0; j <= std::min(s, n - d); ++j) law[d + j] += dust_weight * scaled_[n - d][j];
  }
  return law;
}

std::vector<double> rate_row(const Measure& measure, int m) {
  check_rows_m(m);
  std::vector<double> row(static_cast<std::size_t>(m), 0.0);
  if (measure.kind() == MeasureKind::Lambda) {
    add_lambda_row(measure.lambda(), m, row);
    return row;
  }
  const auto& xi = measure.xi();
  row[m - 1] += xi.kingman_mass * pairs(m);
  for (const auto& a : xi.atoms) {
    const auto law = PaintboxBlockLaw(a.x, m).block_count_law(m);
    const double scale = a.weight / a.self_inner();
    for (int k = 1; k < m; ++k) row[k] += scale * law[k];
  }
  return row;
}

std::vector<double> total_rates(const Measure& measure, int n_max) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n_max, 1)) + 1, 0.0);
  if (measure.kind() == MeasureKind::Xi) {
    for (int m = 2; m <= n_max; ++m) out[m] = xi_total(measure.xi(), m);
    return out;
  }
  const auto& l = measure.lambda();
  for (int m = 2; m <= n_max; ++m) {
    out[m] = l.kingman_mass * pairs(m) + l.star_mass;
    for (const auto& a : l.atoms) out[m] += a.weight * special::binomial_tail2_over_sq(m, a.u);
  }
  // Beta parts accumulate g(m) = g(m-1) + (m-1) B(a, b+m-2) / B(a, b).
  for (const auto& c : l.beta) {
    if (c.weight == 0.0) continue;
    BetaShiftTerms terms(c.a, c.b);
    double running = 0.0;
    for (int m = 2; m <= n_max; ++m) {
      running += (m - 1.0) * terms.next();
      out[m] += c.weight * running;
    }
  }
  return out;
}

RateTable build_rate_table(const Measure& measure, int n_max, RateTableLimits limits) {
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "rate tables need n_max >= 2");
  const int ceiling = measure.kind() == MeasureKind::Lambda ? limits.max_lambda_n : limits.max_xi_n;
  if (n_max > ceiling) {
    throw Error(ErrorCode::TableTooLarge, "n_max = " + std::to_string(n_max) +
                                              " exceeds the configured ceiling " + std::to_string(ceiling));
  }
  RateTable t;
  t.n_max_ = n_max;
  t.g_.resize(static_cast<std::size_t>(n_max) + 1);
  t.jump_.resize(static_cast<std::size_t>(n_max) + 1);
  t.total_ = total_rates(measure, n_max);

  if (measure.kind() == MeasureKind::Lambda) {
    for (int m = 2; m <= n_max; ++m) {
      t.g_[m].assign(static_cast<std::size_t>(m), 0.0);
      add_lambda_row(measure.lambda(), m, t.g_[m]);
    }
  } else {
    const auto& xi = measure.xi();
    for (int m = 2; m <= n_max; ++m) {
      t.g_[m].assign(static_cast<std::size_t>(m), 0.0);
      t.g_[m][m - 1] += xi.kingman_mass * pairs(m);
    }
    for (const auto& a : xi.atoms) {
      const PaintboxBlockLaw paintbox(a.x, n_max);
      const double scale = a.weight / a.self_inner();
      for (int m = 2; m <= n_max; ++m) {
        const auto law = paintbox.block_count_law(m);
        for (int k = 1; k < m; ++k) t.g_[m][k] += scale * law[k];
      }
    }
  }

  for (int m = 2; m <= n_max; ++m) {
    t.jump_[m].assign(static_cast<std::size_t>(m), 0.0);
    for (int k = 1; k < m; ++k) t.jump_[m][k] = t.g_[m][k] / t.total_[m];
  }
  return t;
}

std::vector<double> jump_distribution(const RateTable& t, int m) {
  const auto row = t.jump_row(m);
  return {row.begin(), row.end()};
}

double block_drop_integral(const Measure& measure, int m) {
  check_rows_m(m);
  if (measure.kind() == MeasureKind::Xi) {
    const auto& xi = measure.xi();
    double sum = xi.kingman_mass * pairs(m);
    for (const auto& a : xi.atoms) {
      double inner = m * a.size();
      for (double x : a.x) inner -= special::one_minus_pow(x, m);
      sum += a.weight / a.self_inner() * inner;
    }
    return sum;
  }
  const auto& l = measure.lambda();
  double sum = l.kingman_mass * pairs(m) + l.star_mass * (m - 1.0);
  for (const auto& a : l.atoms) sum += a.weight * lambda_drop_kernel(m, a.u);
  for (const auto& c : l.beta) {
    if (c.weight == 0.0) continue;
    // sum_{p <= m-2} (m-1-p) B(a, b+p) / B(a, b)
    BetaShiftTerms terms(c.a, c.b);
    double part = 0.0;
    for (int p = 0; p <= m - 2; ++p) part += (m - 1.0 - p) * terms.next();
    sum += c.weight * part;
  }
  return sum;
}

BlockDropReport expected_block_drop(const Measure& measure, int m) {
  check_rows_m(m);
  const double total = measure.kind() == MeasureKind::Lambda ? lambda_total(measure.lambda(), m)
                                                              : xi_total(measure.xi(), m);
  BlockDropReport report;
  report.m = m;
  report.e_drop = block_drop_integral(measure, m) / total;
  const auto row = rate_row(measure, m);
  double weighted = 0.0;
  for (int k = 1; k < m; ++k) weighted += (m - k) * row[k];
  report.e_drop_table = weighted / total;
  report.e_internal = internal_branch_integral(measure, m) / total;
  report.h_of_m = h_function(measure, m);
  return report;
}

std::vector<std::pair<int, double>> drop_ratio_diagnostic(const Measure& measure, std::span<const int> grid) {
  require_proper_frequency_condition(measure, "drop_ratio_diagnostic");
  std::vector<std::pair<int, double>> out;
  out.reserve(grid.size());
  for (int m : grid) {
    check_rows_m(m);
    out.emplace_back(m, block_drop_integral(measure, m) / internal_branch_integral(measure, m));
  }
  return out;
}

}  // namespace coaltypes
