#include "hypercouple/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "hypercouple/error.hpp"

namespace hypercouple {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  require(p.size() == q.size(), ErrorCode::kDomain, "distributions have different supports");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return sum / 2.0;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities, double min_expected) {
  require(observed.size() == probabilities.size(), ErrorCode::kDomain, "cell count mismatch");
  ChiSquareResult result;
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * total;
    const double obs = static_cast<double>(observed[i]);
    if (probabilities[i] <= 0.0) {
      result.impossible_observations += observed[i];
      continue;
    }
    if (expected < min_expected) {
      pooled_obs += obs;
      pooled_exp += expected;
      continue;
    }
    result.statistic += (obs - expected) * (obs - expected) / expected;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    result.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  result.dof = std::max(cells - 1, 0);
  if (result.dof == 0) {
    result.p_value = 1.0;
  } else {
    boost::math::chi_squared dist(result.dof);
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  }
  return result;
}

double binomial_pmf(std::uint64_t trials, double p, std::uint64_t x) {
  if (x > trials) return 0.0;
  if (p <= 0.0) return x == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return x == trials ? 1.0 : 0.0;
  boost::math::binomial dist(static_cast<double>(trials), p);
  return boost::math::pdf(dist, static_cast<double>(x));
}

Moments moments(std::span<const double> xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.variance = ss / static_cast<double>(xs.size() - 1);
  }
  return m;
}

}  // namespace hypercouple
