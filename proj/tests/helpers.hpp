// Test-only statistical oracles, independent of the library's closed-form
// implementations: numerical quadrature of the W1 integrand, KS statistics,
// sign tests, and Kendall's tau.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace oracle {

// --- adaptive Simpson quadrature --------------------------------------------

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double fm, double whole,
                       double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, flm, left, eps / 2.0, depth - 1) +
         adaptive(f, m, fm, b, fb, frm, right, eps / 2.0, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double eps = 1e-9, int depth = 48) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return detail::adaptive(f, a, fa, b, fb, fm, detail::simpson(a, fa, b, fb, fm),
                          eps, depth);
}

/// Numerical W1 between the empirical CDF of `sample` and the unit
/// exponential: plain quadrature of |F_n(t) - F_E(t)| over the union of the
/// sample range and the exponential's support, split at the CDF jump points
/// for robustness. (Starting the integration at min(x)-1 would drop the
/// region [0, min(x)] where F_n = 0 but F_E > 0.)
inline double w1_exp_quadrature(std::span<const double> sample, double eps = 1e-9) {
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  const auto integrand = [&](double t) {
    const double fn =
        static_cast<double>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / n;
    const double fe = t >= 0.0 ? 1.0 - std::exp(-t) : 0.0;
    return std::abs(fn - fe);
  };
  std::vector<double> knots;
  knots.push_back(std::min(xs.front(), 0.0) - 1.0);
  for (double x : xs) knots.push_back(x);
  knots.push_back(0.0);
  knots.push_back(std::max(xs.back(), 0.0) + 40.0);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  const double lo = knots.front(), hi = knots.back();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = std::max(knots[k], lo);
    const double b = std::min(knots[k + 1], hi);
    if (b > a) total += adaptive_simpson(integrand, a, b, eps);
  }
  return total;
}

// --- Kolmogorov-Smirnov -------------------------------------------------------

/// One-sample KS statistic against a CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

inline double exp1_cdf(double t) { return t >= 0.0 ? 1.0 - std::exp(-t) : 0.0; }

inline double ks_statistic_exp1(std::vector<double> sample) {
  return ks_statistic(std::move(sample), exp1_cdf);
}

/// Asymptotic one-sample KS critical value; 1.628/sqrt(n) at level 0.01.
inline double ks_critical(std::size_t n, double level = 0.01) {
  const double c = level <= 0.01 ? 1.6276 : 1.3581;  // 0.01 / 0.05
  return c / std::sqrt(static_cast<double>(n));
}

/// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double ks_two_sample_critical(std::size_t n, std::size_t m,
                                     double level = 0.01) {
  const double c = level <= 0.01 ? 1.6276 : 1.3581;
  return c * std::sqrt(static_cast<double>(n + m) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

// --- sign test ---------------------------------------------------------------

/// Normal-approximation z statistic of the sign test on nonzero values;
/// |z| < 2.576 passes at level 0.01.
inline double sign_test_z(std::span<const double> v) {
  double pos = 0.0, neg = 0.0;
  for (double x : v) {
    if (x > 0.0) ++pos;
    if (x < 0.0) ++neg;
  }
  if (pos + neg == 0.0) return 0.0;
  return (pos - neg) / std::sqrt(pos + neg);
}

// --- Kendall's tau -------------------------------------------------------------

namespace detail {

inline std::size_t merge_count(std::vector<double>& v, std::vector<double>& buf,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::size_t inv = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      buf[k++] = v[j++];
      inv += mid - i;
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace detail

/// Kendall's tau-a by inversion counting (assumes continuous data, no ties).
inline double kendall_tau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  std::vector<double> buf(n);
  const std::size_t inv = detail::merge_count(ys, buf, 0, n);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return 1.0 - 2.0 * static_cast<double>(inv) / pairs;
}

// --- misc ----------------------------------------------------------------------

inline double pearson_correlation(std::span<const double> x,
                                  std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
