#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "tailcausal/errors.hpp"
#include "tailcausal/matrix.hpp"
#include "tailcausal/stats.hpp"
#include "tailcausal/wasserstein.hpp"

namespace tailcausal {

/// Per-margin 1-Wasserstein distances to the unit exponential.
struct W1Vector {
  std::vector<double> distances;
  std::vector<std::size_t> sample_sizes;
};

inline W1Vector w1_per_margin(const StandardParetoMatrix& x) {
  const std::size_t d = x.values.cols();
  W1Vector w;
  w.distances.resize(d);
  w.sample_sizes.assign(d, x.values.rows());
  for (std::size_t j = 0; j < d; ++j)
    w.distances[j] = w1_to_unit_exponential(x.values.column(j));
  return w;
}

/// Pairwise causal scores, the extremal topological order, and the source
/// node. scores[i][j] = (W1_i - W1_j) / max_k W1_k; a positive entry reads
/// "margin i is the extremal cause of margin j". The margin farthest from
/// Exp(1) accumulates causes of the others, so the topological order sorts
/// by descending W1 and the source node is the argmax.
struct CausalScoreReport {
  W1Vector w1;
  std::vector<std::vector<double>> scores;   // d x d, zero diagonal
  std::vector<std::size_t> topological_order;  // most cause-like first
  std::size_t source_node = 0;                 // index into margins
  bool source_tie = false;
  bool non_identifiable = false;
  double score_floor = 0.01;
};

namespace detail {

inline double score_from_w1(const std::vector<double>& w1, std::size_t i,
                            std::size_t j) {
  const double mx = *std::max_element(w1.begin(), w1.end());
  if (mx == 0.0)
    throw NonIdentifiableError(
        "causal score undefined: every margin is exactly unit exponential");
  return (w1[i] - w1[j]) / mx;
}

}  // namespace detail

/// The causal score s_{i->j} for one ordered pair of margins.
inline double causal_score(const StandardParetoMatrix& x, std::size_t i,
                           std::size_t j) {
  if (i == j) throw ParameterError("causal_score: i and j must differ");
  if (x.values.rows() < 2)
    throw InsufficientDataError("causal_score: need at least 2 events");
  const W1Vector w = w1_per_margin(x);
  return detail::score_from_w1(w.distances, i, j);
}

/// mean(column j) - mean(column i): a fast surrogate whose sign matches the
/// sign of W1(X_i,E) - W1(X_j,E) at the population level for standard Pareto
/// vectors (each margin is stochastically dominated by the exponential).
inline double mean_gap(const StandardParetoMatrix& x, std::size_t i,
                       std::size_t j) {
  if (i == j) throw ParameterError("mean_gap: i and j must differ");
  if (x.values.rows() < 2)
    throw InsufficientDataError("mean_gap: need at least 2 events");
  return mean(x.values.column(j)) - mean(x.values.column(i));
}

struct MarginRanking {
  std::vector<std::size_t> topological_order;  // most cause-like first
  std::size_t source_node = 0;
  bool tie = false;
};

inline MarginRanking rank_margins_from_w1(const std::vector<double>& w1) {
  const std::size_t d = w1.size();
  MarginRanking r;
  r.topological_order.resize(d);
  std::iota(r.topological_order.begin(), r.topological_order.end(), std::size_t{0});
  std::stable_sort(r.topological_order.begin(), r.topological_order.end(),
                   [&](std::size_t a, std::size_t b) { return w1[a] > w1[b]; });
  r.source_node = r.topological_order.front();
  for (std::size_t j = 0; j < d; ++j)
    if (j != r.source_node && w1[j] == w1[r.source_node]) r.tie = true;
  if (r.tie) {
    // Deterministic convention: lowest index among the tied maxima.
    for (std::size_t j = 0; j < d; ++j)
      if (w1[j] == w1[r.source_node]) {
        r.source_node = j;
        break;
      }
  }
  return r;
}

/// Order margins from most to least cause-like by their W1 distance to the
/// unit exponential; the source node is the margin with the largest distance.
inline MarginRanking rank_margins(const StandardParetoMatrix& x) {
  if (x.values.cols() < 2)
    throw ParameterError("rank_margins: need at least 2 margins");
  return rank_margins_from_w1(w1_per_margin(x).distances);
}

/// Full pairwise score report for one event matrix.
inline CausalScoreReport score_report(const StandardParetoMatrix& x,
                                      double score_floor = 0.01) {
  if (x.values.cols() < 2)
    throw ParameterError("score_report: need at least 2 margins");
  if (x.values.rows() < 2)
    throw InsufficientDataError("score_report: need at least 2 events");

  CausalScoreReport rep;
  rep.score_floor = score_floor;
  rep.w1 = w1_per_margin(x);
  const std::size_t d = rep.w1.distances.size();
  const double mx =
      *std::max_element(rep.w1.distances.begin(), rep.w1.distances.end());
  if (mx == 0.0)
    throw NonIdentifiableError(
        "causal score undefined: every margin is exactly unit exponential");

  rep.scores.assign(d, std::vector<double>(d, 0.0));
  double max_abs = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      rep.scores[i][j] = (rep.w1.distances[i] - rep.w1.distances[j]) / mx;
      max_abs = std::max(max_abs, std::abs(rep.scores[i][j]));
    }

  const MarginRanking ranking = rank_margins_from_w1(rep.w1.distances);
  rep.topological_order = ranking.topological_order;
  rep.source_node = ranking.source_node;
  rep.source_tie = ranking.tie;
  rep.non_identifiable = (mx < 1e-3) || (max_abs < score_floor);
  return rep;
}

}  // namespace tailcausal
