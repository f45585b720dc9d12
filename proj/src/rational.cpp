#include "coaltypes/rational.hpp"

#include <cmath>
#include <string>

#include "coaltypes/errors.hpp"

namespace coaltypes {

namespace {

using boost::multiprecision::cpp_int;

Rational power(const Rational& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Law of the number of blocks after a paintbox event on n balls, by the same
// box-by-box recursion as the floating-point table but exact.
std::vector<Rational> paintbox_law(const std::vector<Rational>& x, const Rational& dust, int n) {
  const int s = static_cast<int>(x.size());
  std::vector<std::vector<Rational>> scaled(static_cast<std::size_t>(n) + 1, std::vector<Rational>(s + 1));
  scaled[0][0] = 1;
  for (int i = 0; i < s; ++i) {
    auto next = scaled;
    for (int u = 1; u <= n; ++u) {
      for (int j = 1; j <= i + 1; ++j) {
        for (int t = 1; t <= u; ++t) {
          next[u][j] += Rational(binomial(u, t)) * power(x[i], t) * scaled[u - t][j - 1];
        }
      }
    }
    scaled = std::move(next);
  }
  std::vector<Rational> law(static_cast<std::size_t>(n) + 1);
  for (int d = 0; d <= n; ++d) {
    const Rational w = Rational(binomial(n, d)) * power(dust, d);
    if (w == 0) continue;
    for (int j = 0; j <= std::min(s, n - d); ++j) law[d + j] += w * scaled[n - d][j];
  }
  return law;
}

}  // namespace

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "nonfinite value has no rational form");
  if (v == 0.0) return 0;
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational out = Rational(cpp_int(scaled));
  if (exponent > 0) out *= Rational(cpp_int(1) << exponent);
  if (exponent < 0) out /= Rational(cpp_int(1) << -exponent);
  return out;
}

RationalDistribution exact_rational_distribution(const Measure& measure, double r_in, int n) {
  if (n < 1 || n > kRationalMaxN) {
    throw Error(ErrorCode::InvalidArgument,
                "exact rational mode supports 1 <= n <= " + std::to_string(kRationalMaxN));
  }
  if (!(r_in > 0.0)) throw Error(ErrorCode::InvalidArgument, "mutation rate must be positive");
  const Rational r = exact_rational(r_in);

  // g[m][k] for 2 <= m <= n.
  std::vector<std::vector<Rational>> g(static_cast<std::size_t>(n) + 1);
  for (int m = 2; m <= n; ++m) g[m].assign(static_cast<std::size_t>(m), Rational(0));

  if (measure.kind() == MeasureKind::Lambda) {
    const auto& l = measure.lambda();
    for (const auto& c : l.beta) {
      if (c.weight > 0.0) {
        throw Error(ErrorCode::UnsupportedMeasure, "beta densities have no exact rational rates");
      }
    }
    const Rational kingman = exact_rational(l.kingman_mass);
    const Rational star = exact_rational(l.star_mass);
    for (int m = 2; m <= n; ++m) {
      g[m][m - 1] += kingman * (m * (m - 1) / 2);
      g[m][1] += star;
      for (const auto& a : l.atoms) {
        const Rational u = exact_rational(a.u);
        const Rational w = exact_rational(a.weight);
        for (int k = 1; k < m; ++k) {
          g[m][k] += w * Rational(binomial(m, k - 1)) * power(u, m - k - 1) * power(1 - u, k - 1);
        }
      }
    }
  } else {
    const auto& xi = measure.xi();
    const Rational kingman = exact_rational(xi.kingman_mass);
    for (int m = 2; m <= n; ++m) g[m][m - 1] += kingman * (m * (m - 1) / 2);
    for (const auto& a : xi.atoms) {
      std::vector<Rational> x;
      Rational size = 0;
      Rational inner = 0;
      for (double v : a.x) {
        x.push_back(exact_rational(v));
        size += x.back();
        inner += x.back() * x.back();
      }
      const Rational dust = size >= 1 ? Rational(0) : 1 - size;
      const Rational scale = exact_rational(a.weight) / inner;
      for (int m = 2; m <= n; ++m) {
        const auto law = paintbox_law(x, dust, m);
        for (int k = 1; k < m; ++k) g[m][k] += scale * law[k];
      }
    }
  }

  RationalDistribution out;
  out.n = n;
  out.p.resize(static_cast<std::size_t>(n) + 1);
  out.p[1] = {Rational(0), Rational(1)};
  for (int m = 2; m <= n; ++m) {
    Rational total = 0;
    for (const auto& v : g[m]) total += v;
    const Rational mutation = r * m;
    const Rational denom = total + mutation;
    out.p[m].assign(static_cast<std::size_t>(m) + 1, Rational(0));
    for (int k = 1; k <= m; ++k) {
      Rational value = mutation * out.p[m - 1][k - 1];
      for (int i = k; i < m; ++i) value += g[m][i] * out.p[i][k];
      out.p[m][k] = value / denom;
    }
  }
  return out;
}

}  // namespace coaltypes
