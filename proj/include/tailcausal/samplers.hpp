#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tailcausal/errors.hpp"
#include "tailcausal/matrix.hpp"
#include "tailcausal/rng.hpp"

namespace tailcausal {

// ---------------------------------------------------------------------------
// Structural equation models over a DAG
// ---------------------------------------------------------------------------

enum class SemKind { lscm, rmlm };

struct SemEdge {
  std::size_t from = 0;  // 0-based parent
  std::size_t to = 0;    // 0-based child
  double weight = 1.0;   // beta_{jk} (lscm) or c_{kj} (rmlm)
};

/// DAG-structured SEM. lscm: Y_j = sum_k beta_{jk} Y_k + eps_j.
/// rmlm: Y_j = max(max_k c_{kj} Y_k, c_{jj} eps_j), all weights positive.
/// Noise eps_j is heavy-tailed Pareto with tail index 1/noise_xi.
struct SemSpec {
  SemKind kind = SemKind::lscm;
  std::size_t d = 2;
  std::vector<SemEdge> edges;
  std::vector<double> self_weights;  // rmlm c_{jj}; defaults to 1
  double noise_xi = 0.1;

  /// Two-node chain Y1 -> Y2 with weight beta.
  static SemSpec chain(SemKind kind, double beta, double xi) {
    SemSpec s;
    s.kind = kind;
    s.d = 2;
    s.edges = {{0, 1, beta}};
    s.noise_xi = xi;
    return s;
  }

  /// Three-node confounder Y1 -> Y2, Y1 -> Y3, optionally Y2 -> Y3.
  static SemSpec confounder(double beta, double xi, double direct_link = 0.0) {
    SemSpec s;
    s.d = 3;
    s.edges = {{0, 1, beta}, {0, 2, beta}};
    if (direct_link != 0.0) s.edges.push_back({1, 2, direct_link});
    s.noise_xi = xi;
    return s;
  }
};

/// Topological order of the SEM's DAG; throws on cycles or bad indices.
inline std::vector<std::size_t> sem_topological_order(const SemSpec& spec) {
  std::vector<std::vector<std::size_t>> children(spec.d);
  std::vector<std::size_t> indegree(spec.d, 0);
  for (const SemEdge& e : spec.edges) {
    if (e.from >= spec.d || e.to >= spec.d)
      throw ParameterError("sem: edge index out of range");
    if (e.from == e.to) throw ParameterError("sem: self-loop in DAG");
    if (spec.kind == SemKind::lscm && e.weight == 0.0)
      throw ParameterError("sem: lscm edge weights must be nonzero");
    if (spec.kind == SemKind::rmlm && !(e.weight > 0.0))
      throw ParameterError("sem: rmlm edge weights must be strictly positive");
    children[e.from].push_back(e.to);
    ++indegree[e.to];
  }
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
  for (std::size_t j = 0; j < spec.d; ++j)
    if (indegree[j] == 0) ready.push_back(j);
  while (!ready.empty()) {
    const std::size_t j = ready.back();
    ready.pop_back();
    order.push_back(j);
    for (std::size_t c : children[j])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  if (order.size() != spec.d) throw ParameterError("sem: DAG contains a cycle");
  return order;
}

/// Apply the SEM recursion to an explicit noise matrix. Exposed so tests can
/// drive the recursion with deterministic innovations.
inline SampleMatrix sem_from_noise(const SemSpec& spec, const SampleMatrix& noise) {
  if (noise.cols() != spec.d)
    throw ParameterError("sem_from_noise: noise column count mismatch");
  const std::vector<std::size_t> order = sem_topological_order(spec);
  std::vector<double> self(spec.d, 1.0);
  if (!spec.self_weights.empty()) {
    if (spec.self_weights.size() != spec.d)
      throw ParameterError("sem: self weight count mismatch");
    self = spec.self_weights;
    for (double c : self)
      if (spec.kind == SemKind::rmlm && !(c > 0.0))
        throw ParameterError("sem: rmlm self weights must be strictly positive");
  }

  std::vector<std::vector<SemEdge>> parents(spec.d);
  for (const SemEdge& e : spec.edges) parents[e.to].push_back(e);

  SampleMatrix y(noise.rows(), spec.d);
  for (std::size_t i = 0; i < noise.rows(); ++i) {
    for (std::size_t j : order) {
      if (spec.kind == SemKind::lscm) {
        double v = noise(i, j);
        for (const SemEdge& e : parents[j]) v += e.weight * y(i, e.from);
        y(i, j) = v;
      } else {
        double v = self[j] * noise(i, j);
        for (const SemEdge& e : parents[j])
          v = std::max(v, e.weight * y(i, e.from));
        y(i, j) = v;
      }
    }
  }
  return y;
}

/// Simulate n draws of the SEM with Pareto(1/xi) innovations.
inline SampleMatrix sample_sem(const SemSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample_sem: n must be >= 1");
  sem_topological_order(spec);  // validate before drawing
  Rng rng(seed);
  SampleMatrix noise(n, spec.d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < spec.d; ++j)
      noise(i, j) = rng.pareto_noise(spec.noise_xi);
  return sem_from_noise(spec, noise);
}

// ---------------------------------------------------------------------------
// Bivariate (asymmetric) logistic extreme-value copula
// ---------------------------------------------------------------------------

/// Tawn copula parameters. beta1 = beta2 = 1 is the symmetric logistic
/// copula; alpha in (0,1] runs from complete dependence to independence.
struct CopulaSpec {
  double alpha = 0.5;
  double beta1 = 1.0;
  double beta2 = 1.0;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw ParameterError("copula: alpha must be in (0,1]");
    if (beta1 < 0.0 || beta1 > 1.0 || beta2 < 0.0 || beta2 > 1.0)
      throw ParameterError("copula: beta1, beta2 must be in [0,1]");
  }
};

/// Closed-form copula CDF C(u,v) = exp[-{(-b1 log u)^(1/a) + (-b2 log v)^(1/a)}^a
/// + (1-b1) log u + (1-b2) log v].
inline double asym_logistic_cdf(double u, double v, const CopulaSpec& c) {
  c.validate();
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
    throw ParameterError("asym_logistic_cdf: u, v must be in (0,1)");
  const double lu = std::log(u);
  const double lv = std::log(v);
  const double t = std::pow(std::pow(-c.beta1 * lu, 1.0 / c.alpha) +
                                std::pow(-c.beta2 * lv, 1.0 / c.alpha),
                            c.alpha);
  return std::exp(-t + (1.0 - c.beta1) * lu + (1.0 - c.beta2) * lv);
}

/// Draws with uniform margins from the asymmetric logistic copula. On the
/// unit-Frechet scale Y_j = max(beta_j A_j, (1-beta_j) B_j), where A is a
/// logistic max-stable pair built from a positive alpha-stable mixture and
/// B_j are independent unit Frechet; margins are then pushed to uniform via
/// exp(-1/y).
inline SampleMatrix sample_asym_logistic(const CopulaSpec& spec, std::size_t n,
                                         std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw ParameterError("sample_asym_logistic: n must be >= 1");
  Rng rng(seed);
  SampleMatrix out(n, 2, std::vector<double>(2 * n, 0.0), {"U1", "U2"});
  const double beta[2] = {spec.beta1, spec.beta2};
  for (std::size_t i = 0; i < n; ++i) {
    double a[2];
    if (spec.alpha == 1.0) {
      a[0] = rng.unit_frechet();
      a[1] = rng.unit_frechet();
    } else {
      const double s = rng.positive_stable(spec.alpha);
      a[0] = std::pow(s / rng.exponential(), spec.alpha);
      a[1] = std::pow(s / rng.exponential(), spec.alpha);
    }
    for (std::size_t j = 0; j < 2; ++j) {
      const double b = rng.unit_frechet();
      const double y = std::max(beta[j] * a[j], (1.0 - beta[j]) * b);
      out(i, j) = std::exp(-1.0 / y);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard Pareto vectors: X = E + U - max(U)
// ---------------------------------------------------------------------------

/// Standard Pareto draws bundled with the exponential draws that generated
/// them; by construction max_j X_ij equals exp_draws[i] exactly.
struct StandardParetoSample {
  StandardParetoMatrix x;
  std::vector<double> exp_draws;
};

/// U-representation sampler: any latent generator of d-vectors works. The
/// callable fills a row of U values on each invocation.
template <typename LatentFn>
StandardParetoSample sample_standard_pareto_u(LatentFn&& latent, std::size_t d,
                                              std::size_t n, std::uint64_t seed) {
  if (d < 1) throw ParameterError("sample_standard_pareto_u: d must be >= 1");
  if (n < 1) throw ParameterError("sample_standard_pareto_u: n must be >= 1");
  Rng rng(seed);
  StandardParetoSample out;
  SampleMatrix x(n, d);
  out.exp_draws.resize(n);
  out.x.event_indices.resize(n);
  std::iota(out.x.event_indices.begin(), out.x.event_indices.end(), std::size_t{0});
  std::vector<double> u(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = rng.exponential();
    latent(rng, std::span<double>(u));
    const double m = *std::max_element(u.begin(), u.end());
    for (std::size_t j = 0; j < d; ++j) x(i, j) = e + (u[j] - m);
    out.exp_draws[i] = e;
  }
  out.x.values = std::move(x);
  return out;
}

// --- named latent generators ------------------------------------------------

/// Independent Gumbel components, CDF exp(-exp(-alpha w)). For use as a
/// T-representation latent the scale must satisfy alpha > 1 so that
/// E[e^W] = Gamma(1 - 1/alpha) is finite.
struct GumbelLatent {
  double alpha;
  std::size_t d;
  void operator()(Rng& rng, std::span<double> out) const {
    for (double& v : out) v = rng.gumbel(alpha);
  }
};

/// Independent components W_j = log G_j with G_j ~ Gamma(alpha_j, 1), i.e.
/// density exp(alpha_j w) exp(-e^w) / Gamma(alpha_j).
struct DirichletLatent {
  std::vector<double> alphas;
  void operator()(Rng& rng, std::span<double> out) const {
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = std::log(rng.gamma(alphas[j]));
  }
};

/// Multivariate normal latent with mean vector and covariance matrix; used
/// both for Husler-Reiss constructions and for plain Gaussian demos.
class GaussianLatent {
 public:
  GaussianLatent(std::vector<double> mean, std::vector<std::vector<double>> cov)
      : mean_(std::move(mean)) {
    const std::size_t d = mean_.size();
    if (cov.size() != d)
      throw ParameterError("gaussian latent: covariance shape mismatch");
    chol_.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
      if (cov[i].size() != d)
        throw ParameterError("gaussian latent: covariance shape mismatch");
      for (std::size_t j = 0; j <= i; ++j) {
        double s = cov[i][j];
        for (std::size_t k = 0; k < j; ++k) s -= chol_[i][k] * chol_[j][k];
        if (i == j) {
          if (s <= 0.0)
            throw ParameterError("gaussian latent: covariance not positive definite");
          chol_[i][i] = std::sqrt(s);
        } else {
          chol_[i][j] = s / chol_[j][j];
        }
      }
    }
  }

  static GaussianLatent iid(std::size_t d, double mean_shift_last = 0.0) {
    std::vector<double> mu(d, 0.0);
    if (d > 0) mu.back() = mean_shift_last;
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) cov[i][i] = 1.0;
    return GaussianLatent(std::move(mu), std::move(cov));
  }

  void operator()(Rng& rng, std::span<double> out) const {
    const std::size_t d = mean_.size();
    std::vector<double> z(d);
    for (std::size_t j = 0; j < d; ++j) z[j] = rng.normal();
    for (std::size_t i = 0; i < d; ++i) {
      double s = mean_[i];
      for (std::size_t k = 0; k <= i; ++k) s += chol_[i][k] * z[k];
      out[i] = s;
    }
  }

  std::size_t dim() const { return mean_.size(); }

 private:
  std::vector<double> mean_;
  std::vector<std::vector<double>> chol_;
};

// --- tagged MGPD specification ----------------------------------------------

enum class MgpRepresentation { u_rep, t_rep };

/// Tagged description of a multivariate GP construction: which
/// representation to use and which latent distribution drives it.
struct MgpSpec {
  MgpRepresentation representation = MgpRepresentation::u_rep;
  std::variant<GumbelLatent, DirichletLatent, GaussianLatent> latent;
  double pool_factor = 20.0;  // t_rep oversampling ratio

  std::size_t dim() const {
    return std::visit(
        [](const auto& l) -> std::size_t {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, GumbelLatent>) return l.d;
          else if constexpr (std::is_same_v<T, DirichletLatent>) return l.alphas.size();
          else return l.dim();
        },
        latent);
  }

  void validate() const {
    const std::size_t d = dim();
    if (d < 1) throw ParameterError("mgp: latent dimension must be >= 1");
    if (representation == MgpRepresentation::t_rep) {
      if (const auto* g = std::get_if<GumbelLatent>(&latent)) {
        if (!(g->alpha > 1.0))
          throw ParameterError(
              "mgp t_rep: Gumbel scale alpha must exceed 1 so that E[e^T] is finite");
      }
    }
    if (const auto* g = std::get_if<GumbelLatent>(&latent)) {
      if (!(g->alpha > 0.0)) throw ParameterError("mgp: Gumbel alpha must be > 0");
    }
    if (const auto* dir = std::get_if<DirichletLatent>(&latent)) {
      for (double a : dir->alphas)
        if (!(a > 0.0)) throw ParameterError("mgp: Dirichlet alphas must be > 0");
    }
    if (!(pool_factor >= 1.0))
      throw ParameterError("mgp: pool_factor must be >= 1");
  }
};

namespace detail {

inline void draw_latent(const MgpSpec& spec, Rng& rng, std::span<double> out) {
  std::visit([&](const auto& l) { l(rng, out); }, spec.latent);
}

}  // namespace detail

/// T-representation sampler. Draws a pool of latent vectors from f_T,
/// reweights them by e^{max(t)} (self-normalized importance resampling), and
/// feeds the resampled latents through the U-representation. Aborts with a
/// heavy-weight error when the effective sample size of the pool drops
/// below n/10.
inline StandardParetoSample sample_standard_pareto_t(const MgpSpec& spec,
                                                     std::size_t n,
                                                     std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw ParameterError("sample_standard_pareto_t: n must be >= 1");
  const std::size_t d = spec.dim();
  const std::size_t pool =
      static_cast<std::size_t>(spec.pool_factor * static_cast<double>(n));

  Rng rng(seed);
  std::vector<double> latents(pool * d);
  std::vector<double> log_w(pool);
  double log_w_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pool; ++i) {
    std::span<double> row(latents.data() + i * d, d);
    detail::draw_latent(spec, rng, row);
    log_w[i] = *std::max_element(row.begin(), row.end());
    log_w_max = std::max(log_w_max, log_w[i]);
  }

  std::vector<double> cum(pool);
  double sum_w = 0.0, sum_w2 = 0.0;
  for (std::size_t i = 0; i < pool; ++i) {
    const double w = std::exp(log_w[i] - log_w_max);
    sum_w += w;
    sum_w2 += w * w;
    cum[i] = sum_w;
  }
  const double ess = sum_w * sum_w / sum_w2;
  if (ess < static_cast<double>(n) / 10.0)
    throw HeavyWeightError(
        "t-representation resampling pool is too unbalanced (effective sample "
        "size " + std::to_string(ess) + " < n/10 = " +
        std::to_string(static_cast<double>(n) / 10.0) +
        "); increase pool_factor or use a lighter-tailed latent (larger Gumbel alpha)");

  StandardParetoSample out;
  SampleMatrix x(n, d);
  out.exp_draws.resize(n);
  out.x.event_indices.resize(n);
  std::iota(out.x.event_indices.begin(), out.x.event_indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const double target = rng.uniform() * sum_w;
    const std::size_t pick = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), target) - cum.begin());
    std::span<const double> row(latents.data() + pick * d, d);
    const double m = *std::max_element(row.begin(), row.end());
    const double e = rng.exponential();
    for (std::size_t j = 0; j < d; ++j) x(i, j) = e + (row[j] - m);
    out.exp_draws[i] = e;
  }
  out.x.values = std::move(x);
  return out;
}

/// Dispatch on the representation tag.
inline StandardParetoSample sample_standard_pareto(const MgpSpec& spec,
                                                   std::size_t n,
                                                   std::uint64_t seed) {
  spec.validate();
  if (spec.representation == MgpRepresentation::t_rep)
    return sample_standard_pareto_t(spec, n, seed);
  return sample_standard_pareto_u(
      [&](Rng& rng, std::span<double> out) { detail::draw_latent(spec, rng, out); },
      spec.dim(), n, seed);
}

// ---------------------------------------------------------------------------
// Univariate GP draws
// ---------------------------------------------------------------------------

inline std::vector<double> sample_gp_univariate(double sigma, double xi,
                                                std::size_t n, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw ParameterError("sample_gp_univariate: sigma must be > 0");
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = rng.gp(sigma, xi);
  return out;
}

}  // namespace tailcausal
