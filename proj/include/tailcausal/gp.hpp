#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tailcausal/errors.hpp"

namespace tailcausal {

/// Survival function (1 + xi z / sigma)^(-1/xi), with the exponential limit
/// at xi = 0. Returns values in [0,1]; 0 beyond the upper endpoint.
inline double gp_survival(double z, double sigma, double xi) {
  if (z <= 0.0) return 1.0;
  if (xi == 0.0) return std::exp(-z / sigma);
  const double t = 1.0 + xi * z / sigma;
  if (t <= 0.0) return 0.0;
  return std::pow(t, -1.0 / xi);
}

/// Maximum-likelihood fit of one generalized Pareto margin.
struct GpMarginFit {
  double sigma = 0.0;      ///< scale, > 0
  double xi = 0.0;         ///< shape, constrained to (-0.5, 1)
  double threshold = 0.0;  ///< threshold the exceedances were taken above
  std::size_t n_exceed = 0;
  double log_likelihood = 0.0;
  bool reliable = false;   ///< n_exceed >= 30
};

namespace detail {

constexpr double kXiLo = -0.5;
constexpr double kXiHi = 1.0;

/// Negative log-likelihood of GP(sigma, xi) for positive exceedances.
inline double gp_nll(std::span<const double> z, double sigma, double xi) {
  const double n = static_cast<double>(z.size());
  if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
  if (std::abs(xi) < 1e-12) {
    double s = 0.0;
    for (double v : z) s += v;
    return n * std::log(sigma) + s / sigma;
  }
  double s = 0.0;
  for (double v : z) {
    const double t = 1.0 + xi * v / sigma;
    if (t <= 0.0) return std::numeric_limits<double>::infinity();
    s += std::log(t);
  }
  return n * std::log(sigma) + (1.0 + 1.0 / xi) * s;
}

/// Probability-weighted-moment estimates, used as the optimizer start.
inline void gp_pwm(std::span<const double> z, double& sigma, double& xi) {
  std::vector<double> s(z.begin(), z.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  double a0 = 0.0, a1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a0 += s[i];
    a1 += s[i] * static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
  }
  a0 /= static_cast<double>(n);
  a1 /= static_cast<double>(n);
  const double denom = a0 - 2.0 * a1;
  if (denom <= 0.0 || a1 <= 0.0) {
    xi = 0.0;
    sigma = a0;
    return;
  }
  xi = 2.0 - a0 / denom;
  sigma = 2.0 * a0 * a1 / denom;
  xi = std::clamp(xi, kXiLo + 0.01, kXiHi - 0.01);
  if (!(sigma > 0.0)) sigma = a0;
}

/// Profile negative log-likelihood over theta = xi/sigma. For fixed theta,
/// xi(theta) = mean log(1 + theta z) maximizes the likelihood, giving
/// nll(theta) = n (log(xi/theta) + xi + 1).
struct GpProfile {
  std::span<const double> z;
  double zmax;

  double xi_of(double theta) const {
    if (theta == 0.0) return 0.0;
    double s = 0.0;
    for (double v : z) s += std::log1p(theta * v);
    return s / static_cast<double>(z.size());
  }

  double nll(double theta) const {
    const double n = static_cast<double>(z.size());
    if (theta == 0.0) {
      double m = 0.0;
      for (double v : z) m += v;
      m /= n;
      return n * (std::log(m) + 1.0);
    }
    if (theta * zmax <= -1.0) return std::numeric_limits<double>::infinity();
    const double xi = xi_of(theta);
    const double ratio = xi / theta;  // equals sigma, positive whenever valid
    if (!(ratio > 0.0) || !std::isfinite(xi))
      return std::numeric_limits<double>::infinity();
    return n * (std::log(ratio) + xi + 1.0);
  }
};

template <typename F>
double golden_section(F&& f, double lo, double hi, int iters = 80) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Fit GP(sigma, xi) by maximum likelihood to positive exceedances above a
/// threshold that has already been subtracted. The shape is constrained to
/// (-0.5, 1); the search starts from probability-weighted moments and runs
/// a profile-likelihood optimization over theta = xi/sigma.
inline GpMarginFit fit_gp_margin(std::span<const double> exceedances,
                                 double threshold = 0.0) {
  if (exceedances.size() < 2)
    throw InsufficientDataError("fit_gp_margin: need at least 2 exceedances, got " +
                                std::to_string(exceedances.size()));
  double zmax = 0.0;
  for (double v : exceedances) {
    if (!std::isfinite(v) || v <= 0.0)
      throw ParameterError("fit_gp_margin: exceedances must be finite and positive");
    zmax = std::max(zmax, v);
  }

  detail::GpProfile prof{exceedances, zmax};

  double sigma0, xi0;
  detail::gp_pwm(exceedances, sigma0, xi0);

  // Candidate thetas: the PWM start, zero (exponential), a geometric sweep on
  // both sides of zero bounded by the support constraint theta > -1/zmax.
  const double theta_floor = -(1.0 - 1e-9) / zmax;
  std::vector<double> grid;
  grid.push_back(0.0);
  const double theta_pwm = xi0 / sigma0;
  if (theta_pwm > theta_floor) grid.push_back(theta_pwm);
  for (int j = -24; j <= 10; ++j) {
    const double mag = std::pow(2.0, j) / zmax;
    grid.push_back(mag);
    if (-mag > theta_floor) grid.push_back(-mag);
  }
  grid.push_back(theta_floor * 0.999);

  double best_theta = 0.0;
  double best = prof.nll(0.0);
  for (double t : grid) {
    const double v = prof.nll(t);
    if (v < best) {
      best = v;
      best_theta = t;
    }
  }

  // Refine around the best grid point.
  std::sort(grid.begin(), grid.end());
  auto it = std::lower_bound(grid.begin(), grid.end(), best_theta);
  double lo = (it == grid.begin()) ? best_theta : *(it - 1);
  double hi = (it + 1 == grid.end()) ? best_theta : *(it + 1);
  if (lo < hi) {
    const double refined =
        detail::golden_section([&](double t) { return prof.nll(t); }, lo, hi);
    if (prof.nll(refined) < best) best_theta = refined;
  }

  double xi = prof.xi_of(best_theta);
  double sigma;
  if (best_theta == 0.0) {
    double m = 0.0;
    for (double v : exceedances) m += v;
    sigma = m / static_cast<double>(exceedances.size());
  } else {
    sigma = xi / best_theta;
  }

  // Enforce the shape constraint; if it binds, re-optimize sigma at fixed xi.
  if (xi <= detail::kXiLo || xi >= detail::kXiHi) {
    xi = std::clamp(xi, detail::kXiLo + 1e-6, detail::kXiHi - 1e-6);
    const double fixed_xi = xi;
    const double log_sigma = detail::golden_section(
        [&](double ls) { return detail::gp_nll(exceedances, std::exp(ls), fixed_xi); },
        std::log(sigma) - 4.0, std::log(sigma) + 4.0);
    sigma = std::exp(log_sigma);
  }

  const double nll = detail::gp_nll(exceedances, sigma, xi);
  if (!std::isfinite(nll) || !(sigma > 0.0))
    throw FitFailureError("fit_gp_margin: optimizer failed (n=" +
                          std::to_string(exceedances.size()) +
                          ", zmax=" + std::to_string(zmax) + ")");

  GpMarginFit fit;
  fit.sigma = sigma;
  fit.xi = xi;
  fit.threshold = threshold;
  fit.n_exceed = exceedances.size();
  fit.log_likelihood = -nll;
  fit.reliable = exceedances.size() >= 30;
  return fit;
}

}  // namespace tailcausal
