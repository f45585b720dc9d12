#pragma once

#include <span>
#include <vector>

#include "coaltypes/measure.hpp"
#include "coaltypes/special.hpp"

namespace coaltypes {

struct RateTableLimits {
  int max_lambda_n = 5000;
  int max_xi_n = 500;
};

// Block-counting jump rates g(m, k) from m blocks to k < m blocks, the total
// rates g(m) and the jump law r(m, k) = g(m, k) / g(m), for 2 <= m <= n_max.
//
// The totals come from the closed integral for the total collision rate, not
// from the row sums, so the two can be checked against each other.
class RateTable {
 public:
  int n_max() const { return n_max_; }

  double g(int m, int k) const;
  double total(int m) const;
  double jump(int m, int k) const;
  double row_sum(int m) const;

  // Indexed by k in [0, m); entry 0 is always zero.
  std::span<const double> row(int m) const;
  std::span<const double> jump_row(int m) const;

 private:
  friend RateTable build_rate_table(const Measure&, int, RateTableLimits);
  int n_max_ = 0;
  std::vector<std::vector<double>> g_;
  std::vector<std::vector<double>> jump_;
  std::vector<double> total_;
};

RateTable build_rate_table(const Measure& m, int n_max, RateTableLimits limits = {});

// g(m, k) for k in [0, m) at a single m, without building the triangle.
std::vector<double> rate_row(const Measure& m, int rows_m);

// Total rates g(m) for m in [0, n_max] from the closed integral form; entries
// 0 and 1 are zero.
std::vector<double> total_rates(const Measure& m, int n_max);

std::vector<double> jump_distribution(const RateTable& t, int m);

// Law of the number of blocks after one paintbox event with frequencies x on n
// balls: entry k is the probability of k blocks (dust balls stay singletons,
// each nonempty box becomes one block). Entry n includes silent events.
// Computed for every n <= n_max from one dynamic program over the boxes.
class PaintboxBlockLaw {
 public:
  PaintboxBlockLaw(std::span<const double> x, int n_max);

  std::vector<double> block_count_law(int n) const;

 private:
  std::vector<double> x_;
  double dust_;
  int n_max_;
  special::BinomialTable binom_;
  // scaled_[u][j]: u! * sum over ways u balls fill exactly j of the boxes of
  // prod x_i^{n_i} / n_i!.
  std::vector<std::vector<double>> scaled_;
};

// Expected block drop at the first jump and expected number of internal
// branches created by it.
struct BlockDropReport {
  int m = 0;
  double e_drop = 0.0;         // E(m - I_m) from the closed integral
  double e_drop_table = 0.0;   // sum_k (m - k) r(m, k) from the rate row
  double e_internal = 0.0;     // E(V_m)
  ExtendedReal h_of_m;         // int sum_i (1 - (1 - x_i)^m) Xi(dx) / (x,x)
};

BlockDropReport expected_block_drop(const Measure& m, int rows_m);

// g(m) E(m - I_m) by the closed integral identity.
double block_drop_integral(const Measure& m, int rows_m);

// (m, E(m - I_m) / E(V_m)) on the grid; requires the proper-frequency condition.
std::vector<std::pair<int, double>> drop_ratio_diagnostic(const Measure& m, std::span<const int> grid);

}  // namespace coaltypes
