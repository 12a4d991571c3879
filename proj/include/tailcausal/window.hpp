#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tailcausal/errors.hpp"
#include "tailcausal/matrix.hpp"

namespace tailcausal {

/// Per-column moving-window aggregator: total, average, or the value at the
/// central point of the window.
enum class Aggregator { sum, mean, center };

inline Aggregator parse_aggregator(const std::string& s) {
  if (s == "sum") return Aggregator::sum;
  if (s == "mean") return Aggregator::mean;
  if (s == "center") return Aggregator::center;
  throw ParameterError("unknown aggregator '" + s + "' (expected sum|mean|center)");
}

struct WindowConfig {
  std::size_t length = 3;
  std::size_t stride = 1;  // 1 = fully overlapping moving windows
  std::vector<Aggregator> aggregators;  // one per column, or one broadcast; empty = mean

  void validate(std::size_t cols) const {
    if (length < 1 || length % 2 == 0)
      throw ParameterError("window length must be odd and >= 1 so a central point exists");
    if (stride < 1) throw ParameterError("window stride must be >= 1");
    if (!aggregators.empty() && aggregators.size() != 1 && aggregators.size() != cols)
      throw ParameterError("need one aggregator per column (or a single one for all)");
  }
};

/// Aggregate rows [t, t+length) for every window start t; with stride 1 the
/// output has n - length + 1 rows.
inline SampleMatrix apply_windows(const SampleMatrix& data, const WindowConfig& cfg) {
  cfg.validate(data.cols());
  if (data.rows() < cfg.length)
    throw InsufficientDataError("window length " + std::to_string(cfg.length) +
                                " exceeds row count " + std::to_string(data.rows()));
  auto agg_for = [&](std::size_t j) {
    if (cfg.aggregators.empty()) return Aggregator::mean;
    return cfg.aggregators.size() == 1 ? cfg.aggregators[0] : cfg.aggregators[j];
  };

  const std::size_t out_rows = (data.rows() - cfg.length) / cfg.stride + 1;
  SampleMatrix out(out_rows, data.cols());
  out.set_column_names(data.column_names());
  for (std::size_t r = 0; r < out_rows; ++r) {
    const std::size_t t = r * cfg.stride;
    for (std::size_t j = 0; j < data.cols(); ++j) {
      switch (agg_for(j)) {
        case Aggregator::sum: {
          double s = 0.0;
          for (std::size_t k = 0; k < cfg.length; ++k) s += data(t + k, j);
          out(r, j) = s;
          break;
        }
        case Aggregator::mean: {
          double s = 0.0;
          for (std::size_t k = 0; k < cfg.length; ++k) s += data(t + k, j);
          out(r, j) = s / static_cast<double>(cfg.length);
          break;
        }
        case Aggregator::center:
          out(r, j) = data(t + cfg.length / 2, j);
          break;
      }
    }
  }
  return out;
}

}  // namespace tailcausal
