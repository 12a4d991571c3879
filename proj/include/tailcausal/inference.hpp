#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tailcausal/errors.hpp"
#include "tailcausal/matrix.hpp"
#include "tailcausal/rng.hpp"
#include "tailcausal/score.hpp"
#include "tailcausal/stats.hpp"

namespace tailcausal {

struct BootstrapConfig {
  std::size_t replicates = 300;
  double ci_level = 0.95;
  double vote_threshold = 0.95;
  std::uint64_t seed = 0;

  void validate() const {
    if (replicates < 2) throw ParameterError("bootstrap: replicates must be >= 2");
    if (!(ci_level > 0.0 && ci_level < 1.0))
      throw ParameterError("bootstrap: ci_level must be in (0,1)");
    if (!(vote_threshold > 0.0 && vote_threshold <= 1.0))
      throw ParameterError("bootstrap: vote_threshold must be in (0,1]");
  }
};

/// Percentile confidence interval for one pairwise score.
struct ScoreCI {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool significant = false;  // zero outside [lo, hi]
};

/// Resample whole event rows with replacement; cross-margin dependence is
/// preserved because rows are never split.
inline SampleMatrix resample_rows(const SampleMatrix& x, Rng& rng) {
  const std::size_t n = x.rows();
  SampleMatrix out(n, x.cols());
  out.set_column_names(x.column_names());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    const std::size_t src = std::min(pick, n - 1);
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(src, j);
  }
  return out;
}

namespace detail {

inline void require_bootstrap_input(const StandardParetoMatrix& x,
                                    const BootstrapConfig& cfg) {
  cfg.validate();
  if (x.values.rows() < 10)
    throw InsufficientDataError("bootstrap: need at least 10 events, got " +
                                std::to_string(x.values.rows()));
  if (x.values.cols() < 2)
    throw ParameterError("bootstrap: need at least 2 margins");
}

/// W1 distances of each margin of one resampled replicate. Replicates use
/// independent substreams of the master seed so that aggregation is
/// independent of execution order.
inline std::vector<double> replicate_w1(const StandardParetoMatrix& x,
                                        std::uint64_t master_seed,
                                        std::size_t replicate) {
  Rng rng(substream_seed(master_seed, replicate));
  const SampleMatrix resampled = resample_rows(x.values, rng);
  std::vector<double> w1(resampled.cols());
  for (std::size_t j = 0; j < resampled.cols(); ++j)
    w1[j] = w1_to_unit_exponential(resampled.column(j));
  return w1;
}

}  // namespace detail

/// Percentile bootstrap over event rows: for every ordered pair (i,j) the
/// score is recomputed on each resample and the CI taken from the replicate
/// quantiles. A score is significant when zero lies outside its interval.
inline std::vector<std::vector<ScoreCI>> bootstrap_scores(
    const StandardParetoMatrix& x, const BootstrapConfig& cfg) {
  detail::require_bootstrap_input(x, cfg);
  const std::size_t d = x.values.cols();

  const CausalScoreReport point = score_report(x);

  std::vector<std::vector<std::vector<double>>> replicate_scores(
      d, std::vector<std::vector<double>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j) replicate_scores[i][j].reserve(cfg.replicates);

  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const std::vector<double> w1 = detail::replicate_w1(x, cfg.seed, r);
    const double mx = *std::max_element(w1.begin(), w1.end());
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (i == j) continue;
        const double s = (mx > 0.0) ? (w1[i] - w1[j]) / mx : 0.0;
        replicate_scores[i][j].push_back(s);
      }
  }

  const double alpha = 1.0 - cfg.ci_level;
  std::vector<std::vector<ScoreCI>> out(d, std::vector<ScoreCI>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      std::vector<double> s = replicate_scores[i][j];
      std::sort(s.begin(), s.end());
      ScoreCI ci;
      ci.point = point.scores[i][j];
      ci.lo = quantile_type6(s, alpha / 2.0);
      ci.hi = quantile_type6(std::move(s), 1.0 - alpha / 2.0);
      ci.significant = (0.0 < ci.lo) || (0.0 > ci.hi);
      out[i][j] = ci;
    }
  return out;
}

/// Majority-vote source-node discovery: the source is recomputed on each
/// resample and a node wins only when its vote fraction reaches the
/// threshold; otherwise the vote is undefined.
struct SourceVote {
  bool has_winner = false;
  std::size_t winner = 0;
  std::vector<double> vote_fractions;
};

inline SourceVote source_node_vote(const StandardParetoMatrix& x,
                                   const BootstrapConfig& cfg) {
  detail::require_bootstrap_input(x, cfg);
  const std::size_t d = x.values.cols();
  std::vector<std::size_t> votes(d, 0);
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const std::vector<double> w1 = detail::replicate_w1(x, cfg.seed, r);
    ++votes[rank_margins_from_w1(w1).source_node];
  }
  SourceVote v;
  v.vote_fractions.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    v.vote_fractions[j] =
        static_cast<double>(votes[j]) / static_cast<double>(cfg.replicates);
  for (std::size_t j = 0; j < d; ++j) {
    if (v.vote_fractions[j] >= cfg.vote_threshold) {
      v.has_winner = true;
      v.winner = j;
      break;
    }
  }
  return v;
}

}  // namespace tailcausal
