#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "tailcausal/errors.hpp"

namespace tailcausal {

/// splitmix64 mixing step; used to derive independent per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for the `stream`-th independent substream of a master seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 1));
}

/// Deterministic random source. All variates are generated from explicit
/// inverse-CDF or rejection constructions on top of mt19937_64 so that a
/// fixed seed reproduces bit-identical output independent of the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;  // top 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
  }

  /// Unit exponential.
  double exponential() { return -std::log(uniform()); }

  /// Standard normal via Box-Muller.
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

  /// Gumbel with CDF exp(-exp(-alpha*w)); location 0, scale 1/alpha.
  double gumbel(double alpha) { return -std::log(exponential()) / alpha; }

  /// Unit Frechet, CDF exp(-1/y).
  double unit_frechet() { return 1.0 / exponential(); }

  /// Heavy-tailed Pareto noise with tail index 1/xi, realized as U^(-xi).
  /// Survival P(Z > z) = z^(-1/xi) for z >= 1; xi = 0 degenerates to 1.
  double pareto_noise(double xi) { return std::pow(uniform(), -xi); }

  /// GP(sigma, xi) variate by inverting the survival function
  /// (1 + xi z / sigma)^(-1/xi); xi = 0 is the exponential limit.
  double gp(double sigma, double xi) {
    const double u = uniform();
    if (xi == 0.0) return -sigma * std::log(u);
    return sigma * (std::pow(u, -xi) - 1.0) / xi;
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape) {
    if (shape <= 0.0) throw ParameterError("gamma: shape must be > 0");
    if (shape < 1.0)
      return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Positive alpha-stable with Laplace transform exp(-t^alpha), 0 < alpha < 1,
  /// by the Chambers-Mallows-Stuck / Kanter construction.
  double positive_stable(double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0)
      throw ParameterError("positive_stable: alpha must be in (0,1)");
    const double theta = std::numbers::pi * uniform();
    const double w = exponential();
    const double a = std::sin((1.0 - alpha) * theta) *
                     std::pow(std::sin(alpha * theta), alpha / (1.0 - alpha)) /
                     std::pow(std::sin(theta), 1.0 / (1.0 - alpha));
    return std::pow(a / w, (1.0 - alpha) / alpha);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tailcausal
