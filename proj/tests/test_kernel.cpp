#include "pskk/kernel.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace {

using pskk::KernelParams;

std::vector<double> random_point(std::mt19937_64& gen, double a, int d) {
  std::vector<double> p(d);
  for (auto& v : p) v = (2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0) * a;
  return p;
}

TEST(KernelEval, ClosedFormExamples) {
  const std::vector<double> x{0.3}, y{0.3};
  EXPECT_NEAR(pskk::kernel_eval(KernelParams(1, 0.5, 1), x, y), 13.0 / 12.0, 1e-15);

  const std::vector<double> p{0.25}, q{-0.25};
  EXPECT_NEAR(pskk::kernel_eval(KernelParams(1, 0.5, 1), p, q), 23.0 / 24.0, 1e-15);

  const std::vector<double> x2{0.3, 0.3};
  EXPECT_NEAR(pskk::kernel_eval(KernelParams(1, 0.5, 2), x2, x2), (13.0 / 12.0) * (13.0 / 12.0), 1e-15);
}

TEST(KernelEval, SymmetryOverRandomPairs) {
  std::mt19937_64 gen(11);
  for (int alpha : {1, 2, 3}) {
    for (double a : {0.5, 1.0, 2.5}) {
      for (int d : {1, 2, 4}) {
        const KernelParams kp(alpha, a, d);
        const pskk::ScaledKorobovKernel kernel(kp);
        for (int rep = 0; rep < 8; ++rep) {
          const auto x = random_point(gen, a, d);
          const auto y = random_point(gen, a, d);
          EXPECT_DOUBLE_EQ(kernel.eval(x, y), kernel.eval(y, x));
          EXPECT_DOUBLE_EQ(kernel.l2_inner(x, y), kernel.l2_inner(y, x));
        }
      }
    }
  }
}

TEST(KernelEval, RejectsOutOfBoxAndBadOrder) {
  const KernelParams kp(2, 1.0, 2);
  const std::vector<double> in{0.2, -0.9}, out{0.2, 1.0001};
  EXPECT_THROW(pskk::kernel_eval(kp, in, out), pskk::DomainError);
  EXPECT_THROW(pskk::kernel_eval(kp, out, in), pskk::DomainError);
  EXPECT_THROW(KernelParams(4, 1.0, 1), pskk::UnsupportedOrderError);
  EXPECT_THROW(KernelParams(0, 1.0, 1), pskk::UnsupportedOrderError);
  EXPECT_THROW(KernelParams(2, -1.0, 1), pskk::ConfigError);
}

TEST(KernelSeries, TruncationAtZeroKeepsConstantTerm) {
  // The frequency-zero term is (2a)^-2 per coordinate: 1/(2a) from the weight
  // and 1/(2a) from the two basis-function values.
  for (double a : {0.5, 2.5}) {
    for (int d : {1, 3}) {
      const KernelParams kp(2, a, d);
      const std::vector<double> x(d, 0.1), y(d, -0.2);
      EXPECT_NEAR(pskk::kernel_series_oracle(kp, x, y, 0), std::pow(2.0 * a, -2 * d),
                  1e-15 * std::pow(2.0 * a, -2 * d));
    }
  }
}

TEST(KernelSeries, SeparableAcrossDimensions) {
  const KernelParams kp1(2, 1.5, 1);
  const KernelParams kp2(2, 1.5, 2);
  const std::vector<double> x{0.3, -0.7}, y{-0.2, 0.4};
  const double sx = pskk::kernel_series_oracle(kp1, std::vector<double>{x[0]}, std::vector<double>{y[0]}, 500);
  const double sy = pskk::kernel_series_oracle(kp1, std::vector<double>{x[1]}, std::vector<double>{y[1]}, 500);
  const double sxy = pskk::kernel_series_oracle(kp2, x, y, 500);
  EXPECT_NEAR(sxy, sx * sy, 1e-13 * std::abs(sx * sy));
}

// |closed form - partial sum| <= C H^{-(2 alpha - 1)} with the analytic tail
// constant; checked at H in {1e2, 1e3, 1e4}.
TEST(KernelSeries, ConsistencyWithClosedForm) {
  std::mt19937_64 gen(17);
  for (int alpha : {1, 2, 3}) {
    for (double a : {0.5, 2.5}) {
      for (int d : {1, 2}) {
        const KernelParams kp(alpha, a, d);
        const pskk::ScaledKorobovKernel kernel(kp);
        for (int rep = 0; rep < 3; ++rep) {
          const auto x = random_point(gen, a, d);
          const auto y = random_point(gen, a, d);
          const double exact = kernel.eval(x, y);
          // Per-coordinate tail: (1/a)(a/pi)^{2 alpha} sum_{h>H} h^{-2 alpha},
          // with the sum bounded by 2 H^{1-2 alpha} / (2 alpha - 1). Factors
          // are bounded by |K_j| + tail; the extra 2 covers the cross terms.
          double factor_bound = 1.0;
          for (int j = 0; j < d; ++j) {
            factor_bound = std::max(factor_bound, std::abs(kernel.eval_factor(x[j] - y[j])));
          }
          for (long h_trunc : {100L, 1000L, 10000L}) {
            const double approx = pskk::kernel_series_oracle(kp, x, y, h_trunc);
            const double tail1 = (1.0 / a) * std::pow(a / std::numbers::pi, 2.0 * alpha) * 2.0 *
                                 std::pow(static_cast<double>(h_trunc), 1.0 - 2.0 * alpha) /
                                 (2.0 * alpha - 1.0);
            const double bound = 2.0 * d * tail1 * std::pow(factor_bound + tail1, d - 1) + 1e-13 * std::abs(exact);
            EXPECT_LE(std::abs(exact - approx), bound)
                << "alpha=" << alpha << " a=" << a << " d=" << d << " H=" << h_trunc;
          }
        }
      }
    }
  }
}

TEST(KernelL2, MatchesQuadratureIn1D) {
  std::mt19937_64 gen(23);
  for (int alpha : {1, 2, 3}) {
    for (double a : {0.5, 1.0, 2.5}) {
      const KernelParams kp(alpha, a, 1);
      for (int rep = 0; rep < 4; ++rep) {
        const auto x = random_point(gen, a, 1);
        const auto y = random_point(gen, a, 1);
        const double closed = pskk::kernel_l2_inner(kp, x, y);
        const double quad = oracles::quad_kernel_product_1d(kp, x[0], y[0]);
        EXPECT_NEAR(closed, quad, 1e-8) << "alpha=" << alpha << " a=" << a;
      }
    }
  }
}

TEST(KernelL2, DiagonalSeriesValue) {
  const std::vector<double> x{0.1};
  EXPECT_NEAR(pskk::kernel_l2_inner(KernelParams(1, 0.5, 1), x, x), 721.0 / 720.0, 1e-15);
}

TEST(KernelL2, QuadratureExampleFromDefinition) {
  // <K(0,.), K(0.5,.)> in the unit box against the composite rule directly.
  const KernelParams kp(1, 0.5, 1);
  const double closed = pskk::kernel_l2_inner(kp, std::vector<double>{0.0}, std::vector<double>{0.5});
  const double quad = oracles::quad_kernel_product_1d(kp, 0.0, 0.5, 100000);
  EXPECT_NEAR(closed, quad, 1e-8);
}

TEST(KernelGram, PositiveSemidefiniteOnRandomNodes) {
  std::mt19937_64 gen(31);
  for (int d : {1, 3}) {
    const KernelParams kp(2, 1.5, d);
    const pskk::ScaledKorobovKernel kernel(kp);
    const std::size_t n = 32;
    std::vector<std::vector<double>> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back(random_point(gen, kp.a, d));
    std::vector<double> gram(n * n);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) gram[i * n + j] = kernel.eval(nodes[i], nodes[j]);
      trace += gram[i * n + i];
    }
    const double min_eig = oracles::jacobi_min_eigenvalue(gram, n);
    EXPECT_GE(min_eig, -1e-8 * trace / static_cast<double>(n)) << "d=" << d;
  }
}

}  // namespace
