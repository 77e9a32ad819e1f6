#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pskk/errors.hpp"
#include "pskk/parallel.hpp"
#include "pskk/points.hpp"

namespace pskk {

//! Product-Gaussian kernel density estimator with per-dimension bandwidths.
struct KdeModel {
  PointSet samples;
  std::vector<double> bandwidths;
};

//! Scott's rule: h_j = sigma_j * M^{-1/(d+4)} with the unbiased sample
//! standard deviation per dimension.
inline KdeModel kde_fit(const PointSet& samples) {
  const std::size_t m = samples.size();
  const std::size_t d = samples.dim();
  if (m < 2) throw DegenerateDataError("kde_fit: need at least two samples");

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = samples[i];
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (auto& v : mean) v /= static_cast<double>(m);

  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = samples[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - mean[j];
      var[j] += diff * diff;
    }
  }
  const double scott = std::pow(static_cast<double>(m), -1.0 / (static_cast<double>(d) + 4.0));
  KdeModel model;
  model.samples = samples;
  model.bandwidths.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(m - 1));
    if (!(sd > 0.0)) {
      throw DegenerateDataError("kde_fit: zero variance in dimension " + std::to_string(j));
    }
    model.bandwidths[j] = sd * scott;
  }
  return model;
}

inline double kde_evaluate(const KdeModel& model, std::span<const double> x) {
  const std::size_t d = model.samples.dim();
  if (x.size() != d) throw ConfigError("kde_evaluate: point dimension does not match model");
  double norm = 1.0;
  std::vector<double> inv_2h2(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double h = model.bandwidths[j];
    norm /= std::sqrt(2.0 * std::numbers::pi) * h;
    inv_2h2[j] = 0.5 / (h * h);
  }
  const std::size_t m = model.samples.size();
  const double* data = model.samples.data().data();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* y = data + i * d;
    double e = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x[j] - y[j];
      e += diff * diff * inv_2h2[j];
    }
    sum += std::exp(-e);
  }
  return norm * sum / static_cast<double>(m);
}

inline std::vector<double> kde_evaluate_batch(const KdeModel& model, const PointSet& queries) {
  std::vector<double> out(queries.size());
  parallel_for(queries.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = kde_evaluate(model, queries[i]);
  });
  return out;
}

}  // namespace pskk
