#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace blockbench {

/// Pairwise (cascade) summation; result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct MeanEstimate {
  double mean = 0.0;
  // Standard error of the mean; NaN when fewer than two observations.
  double se = std::numeric_limits<double>::quiet_NaN();
};

inline MeanEstimate mean_and_se(std::span<const double> v) {
  MeanEstimate out;
  if (v.empty()) {
    out.mean = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double n = static_cast<double>(v.size());
  out.mean = pairwise_sum(v) / n;
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

/// Binomial coefficient as a double (exact for the small n used here).
inline double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

}  // namespace blockbench
