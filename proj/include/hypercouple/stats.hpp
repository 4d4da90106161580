#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hypercouple {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Wilson score interval for a binomial proportion (95% by default).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Half the L1 distance between two distributions on the same support.
double total_variation(std::span<const double> p, std::span<const double> q);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  /// Observations in cells of zero expected probability (a hard violation).
  std::uint64_t impossible_observations = 0;
};

/// Pearson goodness of fit of observed counts to probabilities. Cells whose
/// expected count is below min_expected are pooled into one cell.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities,
                               double min_expected = 5.0);

double binomial_pmf(std::uint64_t trials, double p, std::uint64_t x);

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

/// Sequential in-order accumulation; results depend only on the sample order.
Moments moments(std::span<const double> xs);

}  // namespace hypercouple
