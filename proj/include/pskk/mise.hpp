#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pskk/csv.hpp"
#include "pskk/errors.hpp"
#include "pskk/estimator.hpp"
#include "pskk/kde.hpp"
#include "pskk/lattice.hpp"
#include "pskk/mixture.hpp"
#include "pskk/parallel.hpp"
#include "pskk/rng.hpp"
#include "pskk/sobol.hpp"

namespace pskk {

using DensityFn = std::function<double(std::span<const double>)>;
using FitFn = std::function<DensityFn(const PointSet& samples)>;

//! One row of the benchmark report.
struct MiseReport {
  std::string method;
  std::size_t m = 0;
  int d = 0;
  std::optional<int> alpha;
  std::optional<double> a;
  std::optional<std::uint64_t> n;
  std::optional<double> lambda_or_bandwidth;
  double mise = 0.0;
  double std_error = 0.0;
  double runtime_seconds = 0.0;
};

struct MiseOptions {
  int replications = 20;        // S
  int log2_points = 16;         // t: quadrature uses 2^t Sobol' points
  std::uint64_t seed = 0;
  std::size_t exterior_samples = 1'000'000;  // Monte Carlo size for the tail term
};

//! Monte Carlo estimate of the mass of f^2 outside [-a, a]^d, i.e.
//! E_f[f(X) 1{X outside box}], drawn from the mixture itself.
inline double exterior_l2_monte_carlo(const GaussianMixture& truth, double halfwidth,
                                      std::size_t n_samples, std::uint64_t seed,
                                      double* std_error = nullptr) {
  if (n_samples < 2) throw ConfigError("exterior_l2_monte_carlo: need at least two samples");
  const int d = truth.dim();
  Rng rng(seed);
  const double sigma = std::sqrt(truth.sigma2);
  std::vector<double> cumulative(truth.components());
  double acc = 0.0;
  for (std::size_t k = 0; k < truth.components(); ++k) {
    acc += truth.weights[k];
    cumulative[k] = acc;
  }
  cumulative.back() = 1.0;

  std::vector<double> x(d);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = rng.uniform01();
    std::size_t comp = 0;
    while (comp + 1 < cumulative.size() && u >= cumulative[comp]) ++comp;
    auto mu = truth.means[comp];
    bool outside = false;
    for (int j = 0; j < d; ++j) {
      x[j] = mu[j] + sigma * rng.normal();
      outside = outside || std::abs(x[j]) > halfwidth;
    }
    const double v = outside ? mixture_pdf(truth, x) : 0.0;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(n_samples);
  if (std_error) {
    const double var = std::max(0.0, sum_sq / static_cast<double>(n_samples) - mean * mean);
    *std_error = std::sqrt(var / static_cast<double>(n_samples));
  }
  return mean;
}

//! Estimates the MISE of a fit/evaluate pair against an analytic mixture:
//! S independently sampled replications, each integrated over the box
//! [-h, h]^d by a 2^t-point Sobol' rule
//!
//!   MISE ~ (2h)^d / S * sum_s 2^-t sum_k |fhat_s(p_k) - f(p_k)|^2,
//!
//! plus, when requested, the Monte Carlo estimate of the f^2 mass outside the
//! box. Replication streams derive deterministically from (seed, s) and the
//! grid reduction runs over fixed chunks, so results do not depend on the
//! worker count. std_error combines the replication spread with the exterior
//! Monte Carlo error.
inline MiseReport estimate_mise(const std::string& method_name, const FitFn& fit_method,
                                double box_halfwidth, bool add_exterior_term,
                                const GaussianMixture& truth, std::size_t m, const MiseOptions& opt) {
  if (opt.replications < 2) throw ConfigError("estimate_mise: need at least two replications");
  if (!(box_halfwidth > 0.0)) throw ConfigError("estimate_mise: box half-width must be positive");
  const auto t_start = std::chrono::steady_clock::now();

  const int d = truth.dim();
  const SobolGrid grid = sobol_points(d, opt.log2_points);
  const std::size_t n_pts = grid.points.size();
  PointSet query(n_pts, d);
  std::vector<double> truth_vals(n_pts);
  for (std::size_t k = 0; k < n_pts; ++k) {
    auto w = grid.points[k];
    auto p = query.row(k);
    for (int j = 0; j < d; ++j) p[j] = 2.0 * box_halfwidth * w[j] - box_halfwidth;
    truth_vals[k] = mixture_pdf(truth, query[k]);
  }

  const double volume = std::pow(2.0 * box_halfwidth, d);
  constexpr std::size_t kChunks = 64;
  std::vector<double> rep_values(opt.replications);
  for (int s = 0; s < opt.replications; ++s) {
    const PointSet samples = mixture_sample(truth, m, derive_seed(opt.seed, static_cast<std::uint64_t>(s) + 1));
    const DensityFn density = fit_method(samples);
    std::vector<double> partial(kChunks, 0.0);
    parallel_for_chunks(n_pts, kChunks, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      double acc = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const double diff = density(query[k]) - truth_vals[k];
        acc += diff * diff;
      }
      partial[chunk] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    rep_values[s] = volume * total / static_cast<double>(n_pts);
  }

  double mean = 0.0;
  for (double v : rep_values) mean += v;
  mean /= static_cast<double>(opt.replications);
  double var = 0.0;
  for (double v : rep_values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(opt.replications - 1);
  double se = std::sqrt(var / static_cast<double>(opt.replications));

  double mise = mean;
  if (add_exterior_term) {
    double se_ext = 0.0;
    mise += exterior_l2_monte_carlo(truth, box_halfwidth, opt.exterior_samples, derive_seed(opt.seed, 0),
                                    &se_ext);
    se = std::hypot(se, se_ext);
  }

  MiseReport report;
  report.method = method_name;
  report.m = m;
  report.d = d;
  report.mise = mise;
  report.std_error = se;
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

//! Least-squares slope of log10(mise) against log10(M). Points below min_m
//! are treated as pre-asymptotic and excluded.
inline double fit_loglog_slope(std::span<const std::pair<double, double>> points, double min_m = 100.0) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& [m, mise] : points) {
    if (m < min_m || !(mise > 0.0)) continue;
    const double x = std::log10(m);
    const double y = std::log10(mise);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw ConfigError("fit_loglog_slope: need at least two points at or above min_m");
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (denom == 0.0) throw ConfigError("fit_loglog_slope: degenerate abscissae");
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

// --- convergence studies -----------------------------------------------------

struct StudyConfig {
  GaussianMixture truth;
  std::vector<std::size_t> ms;
  bool run_pskk = true;
  bool run_kde = true;

  // Fixed PSKK parameters, used when schedule == false.
  int alpha = 2;
  double a = 2.5;
  std::uint64_t n = 1009;
  double lambda = 1e-6;

  // Schedule-driven parameters (a, N, lambda from default_params per M).
  bool schedule = false;
  double beta = 1.0;
  double q = 2.0;
  double epsilon = 0.1;
  double eta = 1.0;
  std::uint64_t n_max = 4001;

  double kde_halfwidth = 6.0;  // l: integration half-width for the KDE rows
  MiseOptions mise;
  double slope_min_m = 100.0;
};

struct StudyResult {
  std::vector<MiseReport> reports;
  std::map<std::string, double> slopes;  // per method, over M >= slope_min_m
};

inline FitFn make_pskk_fit(const KernelParams& kp, std::uint64_t n, double lambda, const Lattice& lattice) {
  return [kp, n, lambda, lattice](const PointSet& samples) {
    auto model = std::make_shared<PskkModel>(fit(samples, kp, n, lambda, lattice));
    return DensityFn([model](std::span<const double> x) { return evaluate(*model, x); });
  };
}

//! KDE fit adapter; when `bandwidth_log` is given, the geometric mean of the
//! fitted per-dimension bandwidths of each replication is appended to it.
inline FitFn make_kde_fit(std::shared_ptr<std::vector<double>> bandwidth_log = nullptr) {
  return [bandwidth_log](const PointSet& samples) {
    auto model = std::make_shared<KdeModel>(kde_fit(samples));
    if (bandwidth_log) {
      double log_sum = 0.0;
      for (double h : model->bandwidths) log_sum += std::log(h);
      bandwidth_log->push_back(std::exp(log_sum / static_cast<double>(model->bandwidths.size())));
    }
    return DensityFn([model](std::span<const double> x) { return kde_evaluate(*model, x); });
  };
}

//! Runs the (method, M) sweep and collects per-row reports plus fitted
//! log-log slopes per method.
inline StudyResult convergence_study(const StudyConfig& cfg) {
  if (cfg.ms.empty()) throw ConfigError("convergence_study: empty M list");
  StudyResult result;

  std::map<std::uint64_t, Lattice> lattice_cache;
  auto lattice_for = [&](std::uint64_t n, int alpha) -> const Lattice& {
    auto it = lattice_cache.find(n);
    if (it == lattice_cache.end()) {
      it = lattice_cache.emplace(n, cbc_construct_approximation(cfg.truth.dim(), n, alpha)).first;
    }
    return it->second;
  };

  for (std::size_t m : cfg.ms) {
    if (cfg.run_pskk) {
      double a = cfg.a;
      std::uint64_t n = cfg.n;
      double lambda = cfg.lambda;
      if (cfg.schedule) {
        const ScheduleParams sched = default_params(m, cfg.alpha, cfg.beta, cfg.q, cfg.epsilon, cfg.eta, cfg.n_max);
        a = sched.a;
        n = sched.n;
        lambda = sched.lambda;
      }
      const KernelParams kp(cfg.alpha, a, cfg.truth.dim());
      MiseReport row = estimate_mise("pskk", make_pskk_fit(kp, n, lambda, lattice_for(n, cfg.alpha)),
                                     a, /*add_exterior_term=*/true, cfg.truth, m, cfg.mise);
      row.alpha = cfg.alpha;
      row.a = a;
      row.n = n;
      row.lambda_or_bandwidth = lambda;
      result.reports.push_back(std::move(row));
    }
    if (cfg.run_kde) {
      auto bandwidths = std::make_shared<std::vector<double>>();
      MiseReport row = estimate_mise("kde", make_kde_fit(bandwidths), cfg.kde_halfwidth,
                                     /*add_exterior_term=*/false, cfg.truth, m, cfg.mise);
      if (!bandwidths->empty()) {
        double s = 0.0;
        for (double h : *bandwidths) s += h;
        row.lambda_or_bandwidth = s / static_cast<double>(bandwidths->size());
      }
      result.reports.push_back(std::move(row));
    }
  }

  for (const char* method : {"pskk", "kde"}) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : result.reports) {
      if (r.method == method) pts.emplace_back(static_cast<double>(r.m), r.mise);
    }
    if (pts.size() >= 2) {
      std::size_t usable = 0;
      for (const auto& [m, mise] : pts) {
        if (m >= cfg.slope_min_m && mise > 0.0) ++usable;
      }
      if (usable >= 2) result.slopes[method] = fit_loglog_slope(pts, cfg.slope_min_m);
    }
  }
  return result;
}

//! Report CSV: method,M,d,alpha,a,N,lambda_or_bandwidth,mise,stderr,runtime_seconds.
//! Pass include_runtime = false for byte-reproducible output across runs.
inline void write_report_csv(std::span<const MiseReport> reports, std::ostream& out,
                             bool include_runtime = true) {
  out << "method,M,d,alpha,a,N,lambda_or_bandwidth,mise,stderr,runtime_seconds\n";
  for (const auto& r : reports) {
    out << r.method << ',' << r.m << ',' << r.d << ',';
    if (r.alpha) out << *r.alpha;
    out << ',';
    if (r.a) out << detail::format_full(*r.a);
    out << ',';
    if (r.n) out << *r.n;
    out << ',';
    if (r.lambda_or_bandwidth) out << detail::format_full(*r.lambda_or_bandwidth);
    out << ',' << detail::format_full(r.mise) << ',' << detail::format_full(r.std_error) << ',';
    if (include_runtime) out << detail::format_full(r.runtime_seconds);
    out << '\n';
  }
}

inline void write_report_csv(std::span<const MiseReport> reports, const std::filesystem::path& path,
                             bool include_runtime = true) {
  std::ofstream out(path);
  if (!out) throw IoError("write_report_csv: cannot open " + path.string());
  write_report_csv(reports, out, include_runtime);
}

}  // namespace pskk
