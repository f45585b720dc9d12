#pragma once

#include <vector>

// Small numerical helpers shared by the rate and limit computations.
namespace coaltypes::special {

double log_binomial(int n, int k);
double log_beta(double a, double b);

// log(exp(x) + exp(y)) without overflow; -inf acts as the additive identity.
double log_add_exp(double x, double y);

// 1 - (1 - u)^eta for u in [0, 1], eta >= 0, accurate for small u.
double one_minus_pow(double u, double eta);

// (1 - (1 - u)^eta) / u with the continuous extension eta at u = 0.
double one_minus_pow_over(double u, double eta);

// P(Binomial(n, u) >= 2) / u^2 with the continuous extension n(n-1)/2 at u = 0.
double binomial_tail2_over_sq(int n, double u);

// Row-major Pascal triangle of doubles, C(i, j) for 0 <= j <= i <= n.
class BinomialTable {
 public:
  explicit BinomialTable(int n);

  double operator()(int i, int j) const {
    return (j < 0 || j > i) ? 0.0 : rows_[i][j];
  }
  int size() const { return static_cast<int>(rows_.size()) - 1; }

 private:
  std::vector<std::vector<double>> rows_;
};

}  // namespace coaltypes::special
