#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "tailcausal/inference.hpp"
#include "tailcausal/margins.hpp"
#include "tailcausal/rng.hpp"
#include "tailcausal/samplers.hpp"

using namespace tailcausal;

namespace {

StandardParetoMatrix matrix_from_columns(const std::vector<std::vector<double>>& cols) {
  const std::size_t n = cols[0].size();
  SampleMatrix m(n, cols.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = cols[j][i];
  StandardParetoMatrix x;
  x.values = std::move(m);
  x.event_indices.resize(n);
  std::iota(x.event_indices.begin(), x.event_indices.end(), std::size_t{0});
  return x;
}

StandardParetoMatrix transformed_copula_events(const CopulaSpec& spec,
                                               std::uint64_t seed) {
  const SampleMatrix u = sample_asym_logistic(spec, 10000, seed);
  return to_standard_pareto(u, ThresholdSpec::at_quantile(0.95)).x;
}

}  // namespace

TEST_CASE("bootstrap: identical columns are never significant") {
  Rng rng(1);
  std::vector<double> col(200);
  for (double& v : col) v = rng.exponential() - 0.4;
  const StandardParetoMatrix x = matrix_from_columns({col, col});
  BootstrapConfig cfg;
  cfg.replicates = 200;
  cfg.seed = 5;
  const auto cis = bootstrap_scores(x, cfg);
  CHECK(cis[0][1].point == 0.0);
  CHECK(cis[0][1].lo <= 0.0);
  CHECK(cis[0][1].hi >= 0.0);
  CHECK_FALSE(cis[0][1].significant);
  CHECK_FALSE(cis[1][0].significant);
}

TEST_CASE("bootstrap: config and input validation") {
  Rng rng(2);
  std::vector<double> col(5);
  for (double& v : col) v = rng.exponential();
  const StandardParetoMatrix tiny = matrix_from_columns({col, col});
  BootstrapConfig cfg;
  CHECK_THROWS_AS(bootstrap_scores(tiny, cfg), InsufficientDataError);

  std::vector<double> big(50, 1.0);
  const StandardParetoMatrix x = matrix_from_columns({big, big});
  cfg.replicates = 1;
  CHECK_THROWS_AS(bootstrap_scores(x, cfg), ParameterError);
  cfg.replicates = 100;
  cfg.ci_level = 1.5;
  CHECK_THROWS_AS(bootstrap_scores(x, cfg), ParameterError);
}

TEST_CASE("bootstrap: symmetric logistic scores are rarely significant") {
  BootstrapConfig cfg;
  cfg.replicates = 300;
  int contains_zero = 0;
  const int runs = 100;
  for (int rep = 0; rep < runs; ++rep) {
    cfg.seed = 40 + static_cast<std::uint64_t>(rep);
    const StandardParetoMatrix x =
        transformed_copula_events({0.3, 1.0, 1.0}, 2000 + static_cast<std::uint64_t>(rep));
    const auto cis = bootstrap_scores(x, cfg);
    if (!cis[0][1].significant) ++contains_zero;
  }
  CHECK(contains_zero >= 80);
}

TEST_CASE("bootstrap: asymmetric logistic scores are significantly positive") {
  BootstrapConfig cfg;
  cfg.replicates = 300;
  int significant_positive = 0;
  const int runs = 100;
  for (int rep = 0; rep < runs; ++rep) {
    cfg.seed = 90 + static_cast<std::uint64_t>(rep);
    const StandardParetoMatrix x =
        transformed_copula_events({0.3, 0.8, 0.2}, 4000 + static_cast<std::uint64_t>(rep));
    const auto cis = bootstrap_scores(x, cfg);
    if (cis[0][1].significant && cis[0][1].lo > 0.0) ++significant_positive;
  }
  CHECK(significant_positive >= 95);
}

TEST_CASE("bootstrap: resampled rows are always original rows") {
  Rng rng(3);
  SampleMatrix m(50, 3);
  std::set<std::vector<double>> originals;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<double> row(3);
    for (std::size_t j = 0; j < 3; ++j) {
      m(i, j) = rng.normal();
      row[j] = m(i, j);
    }
    originals.insert(row);
  }
  Rng resampler(11);
  for (int rep = 0; rep < 20; ++rep) {
    const SampleMatrix r = resample_rows(m, resampler);
    for (std::size_t i = 0; i < r.rows(); ++i) {
      std::vector<double> row(3);
      for (std::size_t j = 0; j < 3; ++j) row[j] = r(i, j);
      CHECK(originals.count(row) == 1);
    }
  }
}

TEST_CASE("bootstrap: reproducible and stable under replicate halving") {
  const StandardParetoMatrix x = transformed_copula_events({0.4, 0.8, 0.2}, 5);
  BootstrapConfig cfg;
  cfg.replicates = 200;
  cfg.seed = 77;
  const auto a = bootstrap_scores(x, cfg);
  const auto b = bootstrap_scores(x, cfg);
  CHECK(a[0][1].lo == b[0][1].lo);
  CHECK(a[0][1].hi == b[0][1].hi);
  CHECK(a[0][1].point == b[0][1].point);

  cfg.replicates = 100;
  const auto half = bootstrap_scores(x, cfg);
  CHECK(half[0][1].point == a[0][1].point);  // point estimate is bootstrap-free

  const SourceVote v1 = source_node_vote(x, cfg);
  const SourceVote v2 = source_node_vote(x, cfg);
  CHECK(v1.vote_fractions == v2.vote_fractions);
  CHECK(v1.has_winner == v2.has_winner);
}

TEST_CASE("bootstrap: more replicates stabilize the interval endpoints") {
  const StandardParetoMatrix x = transformed_copula_events({0.4, 0.8, 0.2}, 21);
  auto endpoint_variance = [&](std::size_t replicates) {
    std::vector<double> lows;
    for (int s = 0; s < 20; ++s) {
      BootstrapConfig cfg;
      cfg.replicates = replicates;
      cfg.seed = 3000 + static_cast<std::uint64_t>(s);
      lows.push_back(bootstrap_scores(x, cfg)[0][1].lo);
    }
    const double sd = stddev(lows);
    return sd * sd;
  };
  CHECK(endpoint_variance(400) < endpoint_variance(50));
}

TEST_CASE("vote: a deterministic shift gives a unanimous source") {
  Rng rng(6);
  std::vector<double> c1(300), c2(300);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    c1[i] = rng.exponential();
    c2[i] = c1[i] - 1.0;
  }
  const StandardParetoMatrix x = matrix_from_columns({c1, c2});
  BootstrapConfig cfg;
  cfg.replicates = 300;
  cfg.seed = 8;
  const SourceVote v = source_node_vote(x, cfg);
  CHECK(v.has_winner);
  // The shifted copy sits farther from Exp(1), so it is the cause-like margin.
  CHECK(v.winner == 1);
  CHECK(v.vote_fractions[1] == 1.0);
}

TEST_CASE("vote: confounder lscm elects the confounder across seeds") {
  BootstrapConfig cfg;
  cfg.replicates = 300;
  int wins = 0;
  const int runs = 100;
  for (int rep = 0; rep < runs; ++rep) {
    cfg.seed = 600 + static_cast<std::uint64_t>(rep);
    const SampleMatrix y = sample_sem(SemSpec::confounder(1.0, 0.1), 10000,
                                      7000 + static_cast<std::uint64_t>(rep));
    const StandardParetoMatrix x =
        to_standard_pareto(y, ThresholdSpec::at_quantile(0.95)).x;
    const SourceVote v = source_node_vote(x, cfg);
    if (v.has_winner && v.winner == 0) ++wins;
  }
  CHECK(wins >= 95);
}

TEST_CASE("vote: symmetric pair usually returns no winner") {
  BootstrapConfig cfg;
  cfg.replicates = 300;
  int undefined = 0;
  const int runs = 50;
  for (int rep = 0; rep < runs; ++rep) {
    cfg.seed = 800 + static_cast<std::uint64_t>(rep);
    const StandardParetoMatrix x =
        transformed_copula_events({0.3, 1.0, 1.0}, 9000 + static_cast<std::uint64_t>(rep));
    if (!source_node_vote(x, cfg).has_winner) ++undefined;
  }
  CHECK(undefined > runs / 2);
}

TEST_CASE("bootstrap: coverage sanity for a known-zero score") {
  BootstrapConfig cfg;
  cfg.replicates = 300;
  int contains_zero = 0;
  const int runs = 200;
  for (int rep = 0; rep < runs; ++rep) {
    Rng rng(10000 + static_cast<std::uint64_t>(rep));
    std::vector<double> c1(300), c2(300);
    for (std::size_t i = 0; i < c1.size(); ++i) {
      const double base = rng.exponential() - 0.5;
      c1[i] = base + 0.3 * rng.exponential();
      c2[i] = base + 0.3 * rng.exponential();
    }
    cfg.seed = 20000 + static_cast<std::uint64_t>(rep);
    const auto cis = bootstrap_scores(matrix_from_columns({c1, c2}), cfg);
    if (cis[0][1].lo <= 0.0 && 0.0 <= cis[0][1].hi) ++contains_zero;
  }
  CHECK(contains_zero >= 180);  // 90% of 200
}
