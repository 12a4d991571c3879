#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "tailcausal/errors.hpp"

namespace tailcausal {

/// Exact 1-Wasserstein distance between the empirical distribution of
/// `sample` and the unit exponential,
///
///     W1 = integral over R of |F_n(t) - F_E(t)| dt,
///
/// with F_E(t) = (1 - e^-t) for t >= 0 and 0 below. The integral is
/// evaluated in closed form piecewise. Between consecutive order statistics
/// F_n is the constant k/n, so
///   * on negative segments the integrand is k/n,
///   * on segments in [0, inf) it is |k/n - 1 + e^-t|, which changes sign at
///     most once, at t* = -log(1 - k/n),
///   * the final tail from max(x_(n), 0) contributes e^{-max(x_(n),0)}.
inline double w1_to_unit_exponential(std::span<const double> sample) {
  if (sample.empty())
    throw ParameterError("w1_to_unit_exponential: empty sample");
  for (double v : sample)
    if (!std::isfinite(v))
      throw ParameterError("w1_to_unit_exponential: non-finite value in sample");

  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  const double dn = static_cast<double>(n);

  double total = 0.0;

  // Negative half-line: F_E = 0, integrand = F_n.
  for (std::size_t k = 1; k <= n; ++k) {
    const double a = xs[k - 1];
    if (a >= 0.0) break;
    const double b = (k < n) ? std::min(xs[k], 0.0) : 0.0;
    total += (b - a) * (static_cast<double>(k) / dn);
  }

  // Nonnegative segments with F_n = k/n constant; c = 1 - k/n.
  auto segment = [](double a, double b, double c) {
    if (b <= a) return 0.0;
    const double ea = std::exp(-a);
    const double eb = std::exp(-b);
    const double tstar = (c > 0.0) ? -std::log(c) : std::numeric_limits<double>::infinity();
    if (tstar <= a) return c * (b - a) - (ea - eb);          // e^-t <= c throughout
    if (tstar >= b) return (ea - eb) - c * (b - a);          // e^-t >= c throughout
    const double et = c;                                     // e^-t* = c
    return (ea - et) - c * (tstar - a) + c * (b - tstar) - (et - eb);
  };

  const std::size_t first_nonneg =
      static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), 0.0) - xs.begin());
  double a = 0.0;
  for (std::size_t i = first_nonneg; i < n; ++i) {
    const double k = static_cast<double>(i);  // points strictly before xs[i]
    total += segment(a, xs[i], 1.0 - k / dn);
    a = xs[i];
  }

  // Tail beyond the largest order statistic (or beyond 0 if all are negative).
  total += std::exp(-std::max(xs.back(), 0.0));

  return total;
}

}  // namespace tailcausal
