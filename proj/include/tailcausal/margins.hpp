#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tailcausal/errors.hpp"
#include "tailcausal/gp.hpp"
#include "tailcausal/matrix.hpp"
#include "tailcausal/stats.hpp"

namespace tailcausal {

/// Marginal threshold specification: either explicit per-margin values or a
/// common quantile level from which they are derived empirically.
struct ThresholdSpec {
  double quantile_level = 0.90;
  std::vector<double> per_margin_thresholds;  // empty => derive from quantile

  static ThresholdSpec at_quantile(double q) {
    ThresholdSpec s;
    s.quantile_level = q;
    return s;
  }
  static ThresholdSpec explicit_thresholds(std::vector<double> u) {
    ThresholdSpec s;
    s.per_margin_thresholds = std::move(u);
    return s;
  }
};

/// Per-margin thresholds for `data`: the explicit ones if given, otherwise
/// the empirical quantile_level-quantiles of each column.
inline std::vector<double> derive_thresholds(const SampleMatrix& data,
                                             const ThresholdSpec& spec) {
  if (!spec.per_margin_thresholds.empty()) {
    if (spec.per_margin_thresholds.size() != data.cols())
      throw ParameterError("threshold count does not match column count");
    return spec.per_margin_thresholds;
  }
  if (!(spec.quantile_level > 0.0 && spec.quantile_level < 1.0))
    throw ParameterError("quantile level must be in (0,1)");
  std::vector<double> u(data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j)
    u[j] = quantile_type6_of(data.column(j), spec.quantile_level);
  return u;
}

/// Rows where at least one component exceeds its threshold, shifted by the
/// thresholds componentwise (Z = Y - u). Every returned row has a positive
/// maximum.
struct ExtremeEvents {
  SampleMatrix exceedances;               // Z = Y - u on event rows
  std::vector<std::size_t> event_indices; // rows of the source data
  std::vector<double> thresholds;
};

inline ExtremeEvents select_extreme_events(const SampleMatrix& data,
                                           const ThresholdSpec& spec) {
  data.require_valid(1);
  const std::vector<double> u = derive_thresholds(data, spec);

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (data(i, j) > u[j]) {
        idx.push_back(i);
        break;
      }
    }
  }
  if (idx.empty())
    throw NoExtremeEventsError("no extreme events: no row exceeds its thresholds");

  SampleMatrix z(idx.size(), data.cols());
  z.set_column_names(data.column_names());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t j = 0; j < data.cols(); ++j)
      z(r, j) = data(idx[r], j) - u[j];

  return {std::move(z), std::move(idx), u};
}

enum class TransformMethod { rank, gp_fit };

inline TransformMethod parse_transform_method(const std::string& s) {
  if (s == "rank") return TransformMethod::rank;
  if (s == "gpfit" || s == "gp_fit") return TransformMethod::gp_fit;
  throw ParameterError("unknown transform method '" + s + "' (expected rank|gpfit)");
}

inline const char* transform_method_name(TransformMethod m) {
  return m == TransformMethod::rank ? "rank" : "gpfit";
}

struct TransformResult {
  StandardParetoMatrix x;
  std::vector<GpMarginFit> fits;      // one per margin for gp_fit, empty for rank
  std::vector<std::string> warnings;  // ties, clamped rows, dropped rows
  std::size_t clamped_values = 0;
};

namespace detail {

// Floor for gp_fit values whose GP argument falls at or below zero.
constexpr double kClampEpsilon = 1e-6;

inline double gp_to_standard(double z, double sigma, double xi,
                             std::size_t& clamped) {
  if (std::abs(xi) < 1e-9) return z / sigma;
  const double t = 1.0 + xi * z / sigma;
  if (t <= 0.0) {
    ++clamped;
    return std::log(kClampEpsilon) / xi;
  }
  return std::log(t) / xi;
}

}  // namespace detail

/// Transform data to the standard Pareto scale (unit scale, zero shape),
/// restricted to the extreme-event rows.
///
/// rank: each margin is mapped to the exponential scale through its
///   empirical CDF, E = -log(1 - r/(n+1)) with r the average rank over the
///   full dataset, then recentred so that the threshold sits at zero:
///   X = E + log(1 - q). Positive values of X are approximately Exp(1).
///
/// gp_fit: each margin gets a GP maximum-likelihood fit on its positive
///   exceedances and X = log(1 + xi Z / sigma) / xi (Z / sigma when xi = 0).
///   Rows below the lower support endpoint are clamped to log(1e-6)/xi and
///   counted in the warnings.
inline TransformResult to_standard_pareto(const SampleMatrix& data,
                                          const ThresholdSpec& spec,
                                          TransformMethod method = TransformMethod::rank) {
  data.require_valid(1);
  ExtremeEvents events = select_extreme_events(data, spec);
  const std::size_t m = events.event_indices.size();
  const std::size_t d = data.cols();

  TransformResult out;
  SampleMatrix x(m, d);
  x.set_column_names(data.column_names());

  if (method == TransformMethod::rank) {
    const double np1 = static_cast<double>(data.rows() + 1);
    for (std::size_t j = 0; j < d; ++j) {
      const std::vector<double> col = data.column(j);
      const std::vector<double> ranks = average_ranks(col);
      const std::size_t ties = largest_tie_block(col);
      if (2 * ties > data.rows())
        out.warnings.push_back("margin '" + data.column_names()[j] +
                               "': more than 50% tied values; rank transform is coarse");
      // The threshold maps to zero on the exponential scale: for derived
      // thresholds e_u = -log(1-q); for explicit ones the margin's empirical
      // level at the threshold is used instead.
      double e_u;
      if (spec.per_margin_thresholds.empty()) {
        const double q = spec.quantile_level;
        if (!(q > 0.0 && q < 1.0))
          throw ParameterError("rank transform requires a quantile level in (0,1)");
        e_u = -std::log(1.0 - q);
      } else {
        std::size_t at_or_below = 0;
        for (double v : col)
          if (v <= events.thresholds[j]) ++at_or_below;
        e_u = -std::log(1.0 - static_cast<double>(at_or_below) / np1);
      }
      for (std::size_t r = 0; r < m; ++r) {
        const double e = -std::log(1.0 - ranks[events.event_indices[r]] / np1);
        x(r, j) = e - e_u;
      }
    }
  } else {
    out.fits.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> pos;
      for (std::size_t r = 0; r < m; ++r)
        if (events.exceedances(r, j) > 0.0) pos.push_back(events.exceedances(r, j));
      out.fits.push_back(fit_gp_margin(pos, events.thresholds[j]));
      const GpMarginFit& f = out.fits.back();
      std::size_t clamped = 0;
      for (std::size_t r = 0; r < m; ++r)
        x(r, j) = detail::gp_to_standard(events.exceedances(r, j), f.sigma, f.xi, clamped);
      if (clamped > 0) {
        out.clamped_values += clamped;
        out.warnings.push_back("margin '" + data.column_names()[j] + "': " +
                               std::to_string(clamped) +
                               " sub-support values clamped");
      }
    }
  }

  // With averaged tied ranks a selected row can land entirely at or below
  // zero on the transformed scale; such rows are dropped to preserve the
  // L-shaped support.
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < m; ++r) {
    double rowmax = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) rowmax = std::max(rowmax, x(r, j));
    if (rowmax > 0.0) keep.push_back(r);
  }
  if (keep.size() < m) {
    out.warnings.push_back(std::to_string(m - keep.size()) +
                           " event rows mapped to non-positive maxima and were dropped");
    SampleMatrix pruned(keep.size(), d);
    pruned.set_column_names(data.column_names());
    std::vector<std::size_t> idx;
    idx.reserve(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
      for (std::size_t j = 0; j < d; ++j) pruned(r, j) = x(keep[r], j);
      idx.push_back(events.event_indices[keep[r]]);
    }
    out.x = {std::move(pruned), std::move(idx)};
  } else {
    out.x = {std::move(x), std::move(events.event_indices)};
  }
  return out;
}

}  // namespace tailcausal
