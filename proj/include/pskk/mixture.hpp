#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pskk/errors.hpp"
#include "pskk/points.hpp"
#include "pskk/rng.hpp"

namespace pskk {

//! Isotropic Gaussian mixture: K components with shared variance sigma2,
//! used as analytic ground truth in the benchmark harness.
struct GaussianMixture {
  std::vector<double> weights;
  PointSet means;
  double sigma2 = 1.0;

  GaussianMixture() = default;
  GaussianMixture(std::vector<double> w, PointSet mu, double s2)
      : weights(std::move(w)), means(std::move(mu)), sigma2(s2) {
    validate();
  }

  int dim() const { return static_cast<int>(means.dim()); }
  std::size_t components() const { return weights.size(); }

  void validate() const {
    if (weights.empty() || weights.size() != means.size()) {
      throw ConfigError("GaussianMixture: weights and means must match and be non-empty");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ConfigError("GaussianMixture: weights must be non-negative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("GaussianMixture: weights must sum to 1");
    if (!(sigma2 > 0.0)) throw ConfigError("GaussianMixture: sigma2 must be positive");
  }
};

inline double mixture_pdf(const GaussianMixture& gm, std::span<const double> x) {
  const int d = gm.dim();
  if (static_cast<int>(x.size()) != d) throw ConfigError("mixture_pdf: dimension mismatch");
  const double inv_2s2 = 0.5 / gm.sigma2;
  const double norm = std::pow(2.0 * std::numbers::pi * gm.sigma2, -0.5 * d);
  double sum = 0.0;
  for (std::size_t k = 0; k < gm.components(); ++k) {
    auto mu = gm.means[k];
    double sq = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = x[j] - mu[j];
      sq += diff * diff;
    }
    sum += gm.weights[k] * std::exp(-sq * inv_2s2);
  }
  return norm * sum;
}

//! Draws M iid points: a categorical component pick followed by an isotropic
//! Gaussian around its mean. Deterministic given the seed.
inline PointSet mixture_sample(const GaussianMixture& gm, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw ConfigError("mixture_sample: need at least one sample");
  const int d = gm.dim();
  std::vector<double> cumulative(gm.components());
  double acc = 0.0;
  for (std::size_t k = 0; k < gm.components(); ++k) {
    acc += gm.weights[k];
    cumulative[k] = acc;
  }
  cumulative.back() = 1.0;

  Rng rng(seed);
  const double sigma = std::sqrt(gm.sigma2);
  PointSet out(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform01();
    std::size_t comp = 0;
    while (comp + 1 < cumulative.size() && u >= cumulative[comp]) ++comp;
    auto mu = gm.means[comp];
    auto row = out.row(i);
    for (int j = 0; j < d; ++j) row[j] = mu[j] + sigma * rng.normal();
  }
  return out;
}

//! Benchmark densities: gm2d has nine peaks on the grid {-2,0,2}^2 with
//! sigma^2 = 1/4; gm4d/gm5d/gm6d have nine equally weighted components with
//! sigma = 0.7 and means mu_k,j = {mult_j k / 9} - 4/9 built from the
//! per-dimension multiplier patterns below.
inline GaussianMixture example_mixture(std::string_view name) {
  auto fractional_means = [](std::span<const int> mult) {
    PointSet means(9, mult.size());
    for (int k = 0; k < 9; ++k) {
      auto row = means.row(k);
      for (std::size_t j = 0; j < mult.size(); ++j) {
        row[j] = static_cast<double>((mult[j] * k) % 9) / 9.0 - 4.0 / 9.0;
      }
    }
    return means;
  };
  const std::vector<double> ninth(9, 1.0 / 9.0);

  if (name == "gm2d") {
    PointSet means(9, 2);
    int idx = 0;
    for (double u : {-2.0, 0.0, 2.0}) {
      for (double v : {-2.0, 0.0, 2.0}) {
        means.row(idx)[0] = u;
        means.row(idx)[1] = v;
        ++idx;
      }
    }
    return GaussianMixture(ninth, std::move(means), 0.25);
  }
  if (name == "gm4d") {
    const int mult[] = {1, 2, 4, 8};
    return GaussianMixture(ninth, fractional_means(mult), 0.49);
  }
  if (name == "gm5d") {
    const int mult[] = {1, 2, 4, 6, 8};
    return GaussianMixture(ninth, fractional_means(mult), 0.49);
  }
  if (name == "gm6d") {
    const int mult[] = {1, 2, 4, 6, 7, 8};
    return GaussianMixture(ninth, fractional_means(mult), 0.49);
  }
  throw ConfigError("example_mixture: unknown name '" + std::string(name) +
                    "' (expected gm2d, gm4d, gm5d or gm6d)");
}

}  // namespace pskk
