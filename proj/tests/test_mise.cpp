#include "pskk/mise.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "pskk/plot.hpp"

namespace {

pskk::FitFn truth_method(const pskk::GaussianMixture& gm) {
  return [gm](const pskk::PointSet&) {
    return pskk::DensityFn([gm](std::span<const double> x) { return pskk::mixture_pdf(gm, x); });
  };
}

pskk::FitFn zero_method() {
  return [](const pskk::PointSet&) {
    return pskk::DensityFn([](std::span<const double>) { return 0.0; });
  };
}

TEST(EstimateMise, TruthMethodScoresZero) {
  const auto gm = pskk::example_mixture("gm2d");
  pskk::MiseOptions opt;
  opt.replications = 3;
  opt.log2_points = 10;
  const auto report = pskk::estimate_mise("truth", truth_method(gm), 6.0, false, gm, 10, opt);
  EXPECT_LE(report.mise, 1e-10);
  EXPECT_EQ(report.d, 2);
  EXPECT_EQ(report.m, 10u);
}

TEST(EstimateMise, ZeroMethodRecoversSquaredMass) {
  const auto gm = pskk::example_mixture("gm2d");
  pskk::MiseOptions opt;
  opt.replications = 2;
  opt.log2_points = 16;
  const auto report = pskk::estimate_mise("zero", zero_method(), 6.0, false, gm, 10, opt);

  // Independent 2^20-point Sobol' quadrature of f^2 over the same box.
  const auto grid = pskk::sobol_points(2, 20);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    const std::vector<double> p{12.0 * grid.points[k][0] - 6.0, 12.0 * grid.points[k][1] - 6.0};
    const double f = pskk::mixture_pdf(gm, p);
    sum += f * f;
  }
  const double oracle = 144.0 * sum / static_cast<double>(grid.points.size());
  EXPECT_NEAR(report.mise, oracle, 1e-3 * oracle);
}

TEST(EstimateMise, StderrShrinksWithReplications) {
  const auto gm = pskk::example_mixture("gm2d");
  pskk::MiseOptions small, large;
  small.replications = 4;
  large.replications = 16;
  small.log2_points = large.log2_points = 8;
  small.seed = large.seed = 5;
  const auto fit = pskk::make_kde_fit();
  const auto r_small = pskk::estimate_mise("kde", fit, 6.0, false, gm, 64, small);
  const auto r_large = pskk::estimate_mise("kde", fit, 6.0, false, gm, 64, large);
  EXPECT_LT(r_large.std_error, r_small.std_error);
}

TEST(EstimateMise, ExteriorTermAddsTailMass) {
  const auto gm = pskk::example_mixture("gm2d");
  pskk::MiseOptions opt;
  opt.replications = 2;
  opt.log2_points = 8;
  opt.exterior_samples = 200000;
  const auto fit = truth_method(gm);
  const auto inside_only = pskk::estimate_mise("truth", fit, 2.0, false, gm, 10, opt);
  const auto with_tail = pskk::estimate_mise("truth", fit, 2.0, true, gm, 10, opt);
  // At a = 2 a visible share of the nine-peak density mass sits outside.
  EXPECT_GT(with_tail.mise, inside_only.mise);
  EXPECT_GT(with_tail.mise, 1e-4);
}

TEST(ExteriorMonteCarloEstimate, MatchesSobolQuadratureIn2D) {
  const auto gm = pskk::example_mixture("gm2d");
  const double a = 2.0;
  double se = 0.0;
  const double mc = pskk::exterior_l2_monte_carlo(gm, a, 2000000, 11, &se);

  // Quadrature over [-8,8]^2 minus the inner box via indicator weighting.
  const auto grid = pskk::sobol_points(2, 20);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    const std::vector<double> p{16.0 * grid.points[k][0] - 8.0, 16.0 * grid.points[k][1] - 8.0};
    if (std::abs(p[0]) <= a && std::abs(p[1]) <= a) continue;
    const double f = pskk::mixture_pdf(gm, p);
    sum += f * f;
  }
  const double oracle = 256.0 * sum / static_cast<double>(grid.points.size());
  EXPECT_NEAR(mc, oracle, std::max(4.0 * se, 2e-3 * oracle));
}

TEST(SlopeFit, ExactPowerLawRecovered) {
  std::vector<std::pair<double, double>> pts;
  for (double m : {1e2, 1e3, 1e4, 1e5, 1e6}) pts.emplace_back(m, 3.7 * std::pow(m, -0.8));
  EXPECT_NEAR(pskk::fit_loglog_slope(pts), -0.8, 1e-12);
}

TEST(SlopeFit, PreAsymptoticPointsExcluded) {
  std::vector<std::pair<double, double>> pts{{10.0, 1e6}, {100.0, 1e-2}, {1000.0, 1e-3}, {10000.0, 1e-4}};
  EXPECT_NEAR(pskk::fit_loglog_slope(pts, 100.0), -1.0, 1e-12);
  EXPECT_THROW(pskk::fit_loglog_slope(std::vector<std::pair<double, double>>{{10.0, 1.0}}, 100.0),
               pskk::ConfigError);
}

// Monotone PSKK error decay on the 4D mixture at fixed parameters, within
// twice the replication noise.
TEST(ConvergenceStudy, PskkMiseMonotoneOnGm4d) {
  pskk::StudyConfig cfg;
  cfg.truth = pskk::example_mixture("gm4d");
  cfg.ms = {100, 1000, 10000};
  cfg.run_kde = false;
  cfg.alpha = 2;
  cfg.a = 2.5;
  cfg.n = 1009;
  cfg.lambda = 1e-6;
  cfg.mise.replications = 5;
  cfg.mise.log2_points = 12;
  cfg.mise.exterior_samples = 200000;
  cfg.mise.seed = 2;
  const auto result = pskk::convergence_study(cfg);
  ASSERT_EQ(result.reports.size(), 3u);
  for (std::size_t i = 0; i + 1 < result.reports.size(); ++i) {
    const auto& hi = result.reports[i];
    const auto& lo = result.reports[i + 1];
    EXPECT_LE(lo.mise, hi.mise + 2.0 * (hi.std_error + lo.std_error))
        << "M=" << hi.m << " -> " << lo.m;
  }
  ASSERT_TRUE(result.slopes.count("pskk"));
  EXPECT_LT(result.slopes.at("pskk"), 0.0);
}

TEST(ConvergenceStudy, ReportRowsAndCsvShape) {
  pskk::StudyConfig cfg;
  cfg.truth = pskk::example_mixture("gm2d");
  cfg.ms = {100, 1000};
  cfg.alpha = 2;
  cfg.a = 6.0;
  cfg.n = 31;
  cfg.lambda = 1e-6;
  cfg.mise.replications = 3;
  cfg.mise.log2_points = 8;
  cfg.mise.exterior_samples = 10000;
  const auto result = pskk::convergence_study(cfg);
  ASSERT_EQ(result.reports.size(), 4u);  // 2 methods x 2 sample counts

  std::stringstream csv1, csv2;
  pskk::write_report_csv(result.reports, csv1, /*include_runtime=*/false);
  pskk::write_report_csv(result.reports, csv2, /*include_runtime=*/false);
  EXPECT_EQ(csv1.str(), csv2.str());

  std::string header;
  std::getline(csv1, header);
  EXPECT_EQ(header, "method,M,d,alpha,a,N,lambda_or_bandwidth,mise,stderr,runtime_seconds");
  std::size_t rows = 0;
  for (std::string line; std::getline(csv1, line);) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 4u);

  std::stringstream svg;
  pskk::write_loglog_svg(result.reports, result.slopes, svg, "test");
  EXPECT_NE(svg.str().find("<svg"), std::string::npos);
  EXPECT_NE(svg.str().find("polyline"), std::string::npos);
}

TEST(ScheduleMode, UsesPerSampleCountParameters) {
  pskk::StudyConfig cfg;
  cfg.truth = pskk::example_mixture("gm4d");
  cfg.ms = {100, 1000};
  cfg.run_kde = false;
  cfg.schedule = true;
  cfg.alpha = 2;
  cfg.beta = 1.0;
  cfg.q = 2.0;
  cfg.epsilon = 1e-9;
  cfg.eta = std::exp(-1.0);
  cfg.mise.replications = 2;
  cfg.mise.log2_points = 8;
  cfg.mise.exterior_samples = 10000;
  const auto result = pskk::convergence_study(cfg);
  ASSERT_EQ(result.reports.size(), 2u);
  EXPECT_EQ(*result.reports[0].n, 31u);
  EXPECT_EQ(*result.reports[1].n, 97u);
  EXPECT_NEAR(*result.reports[0].a, std::sqrt((std::log(100.0) - 1.0) / 2.0), 1e-12);
}

}  // namespace
