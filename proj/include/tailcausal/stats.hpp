#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "tailcausal/errors.hpp"

namespace tailcausal {

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sample standard deviation (n-1 denominator).
inline double stddev(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

inline double median(std::vector<double> x) {
  const std::size_t n = x.size();
  std::sort(x.begin(), x.end());
  if (n % 2 == 1) return x[n / 2];
  return 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

/// Empirical quantile with the rank/(n+1) plotting position (Hyndman-Fan
/// type 6). With this convention, y > quantile(q) holds exactly for the
/// values whose rank r satisfies r/(n+1) > q, which keeps threshold
/// selection and the rank transform consistent with each other.
inline double quantile_type6(std::vector<double> sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile: empty sample");
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantile: q must be in (0,1)");
  const std::size_t n = sorted.size();
  const double h = q * static_cast<double>(n + 1);
  if (h <= 1.0) return sorted.front();
  if (h >= static_cast<double>(n)) return sorted.back();
  const std::size_t k = static_cast<std::size_t>(h);  // floor, 1-based
  const double frac = h - static_cast<double>(k);
  return sorted[k - 1] + frac * (sorted[k] - sorted[k - 1]);
}

inline double quantile_type6_of(std::span<const double> x, double q) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return quantile_type6(std::move(s), q);
}

/// 1-based ranks with ties shared as the average rank of the tied block.
inline std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // average of i+1..j+1
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

/// Size of the largest block of identical values.
inline std::size_t largest_tie_block(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  std::size_t best = 0, run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    run = (i > 0 && s[i] == s[i - 1]) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

}  // namespace tailcausal
