#include "pskk/fft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace {

using Complex = std::complex<double>;

std::vector<Complex> naive_dft(const std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<Complex> out(n, Complex(0, 0));
  const double sign = inverse ? 2.0 : -2.0;
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * std::numbers::pi * static_cast<double>(j * l) / static_cast<double>(n);
      out[l] += a[j] * Complex(std::cos(ang), std::sin(ang));
    }
    if (inverse) out[l] /= static_cast<double>(n);
  }
  return out;
}

TEST(Dft, MatchesNaiveTransformForMixedSizes) {
  std::mt19937_64 gen(5);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 31u, 101u}) {
    std::vector<Complex> a(n);
    for (auto& v : a) {
      v = Complex(static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5,
                  static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5);
    }
    for (bool inverse : {false, true}) {
      const auto fast = pskk::fft::dft(a, inverse);
      const auto slow = naive_dft(a, inverse);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(fast[i].real(), slow[i].real(), 1e-11) << "n=" << n << " inverse=" << inverse;
        EXPECT_NEAR(fast[i].imag(), slow[i].imag(), 1e-11) << "n=" << n << " inverse=" << inverse;
      }
    }
  }
}

TEST(Dft, RoundTripIdentity) {
  std::mt19937_64 gen(7);
  for (std::size_t n : {4u, 17u, 64u, 947u}) {
    std::vector<Complex> a(n);
    for (auto& v : a) v = Complex(static_cast<double>(gen() >> 11) * 0x1.0p-53, 0.0);
    const auto back = pskk::fft::dft(pskk::fft::dft(a, false), true);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i].real(), a[i].real(), 1e-12);
  }
}

TEST(CirculantMultiply, MatchesDenseDefinition) {
  std::mt19937_64 gen(9);
  const std::size_t n = 13;
  std::vector<double> row(n), x(n);
  for (auto& v : row) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  for (auto& v : x) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  const auto fast = pskk::circulant_multiply(row, x);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += row[(k + n - j) % n] * x[k];
    EXPECT_DOUBLE_EQ(fast[j], s);
  }
}

TEST(SolveCirculant, ScaledIdentityRow) {
  const std::vector<double> row{2.0, 0.0, 0.0, 0.0, 0.0};
  const std::vector<double> b{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto c = pskk::solve_circulant(row, b);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(c[i], b[i] / 2.0, 1e-13);
}

TEST(SolveCirculant, ScalarSystem) {
  const auto c = pskk::solve_circulant({4.0}, {2.0});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0], 0.5);
}

// Random SPD circulant rows: symmetric row with strictly positive symbol by
// construction (dominant constant + small cosine modes).
TEST(SolveCirculant, AgreesWithDenseLuOnSpdRows) {
  std::mt19937_64 gen(13);
  for (std::size_t n : {11u, 31u}) {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> row(n, 0.0);
      row[0] = 2.0;
      for (std::size_t m = 1; m <= n / 2; ++m) {
        const double amp = (static_cast<double>(gen() >> 11) * 0x1.0p-53) / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
          row[k] += 2.0 * amp * std::cos(2.0 * std::numbers::pi * static_cast<double>(m * k) / static_cast<double>(n));
        }
      }
      std::vector<double> b(n);
      for (auto& v : b) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;

      std::vector<double> dense(n * n);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) dense[j * n + k] = row[(k + n - j) % n];
      }
      const auto expected = oracles::lu_solve(dense, b);
      const auto got = pskk::solve_circulant(row, b);

      double scale = 0.0;
      for (double v : expected) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], expected[i], 1e-10 * scale);

      const auto ac = pskk::circulant_multiply(row, got);
      double bnorm = 0.0, res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        bnorm = std::max(bnorm, std::abs(b[i]));
        res = std::max(res, std::abs(ac[i] - b[i]));
      }
      EXPECT_LE(res, 1e-10 * bnorm);
    }
  }
}

TEST(SolveCirculant, NearSingularSymbolRaises) {
  // Constant row: symbol vanishes at every nonzero frequency, and a ramp rhs
  // has real content there.
  const std::vector<double> row(8, 1.0);
  std::vector<double> b(8);
  for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<double>(i + 1);
  try {
    pskk::solve_circulant(row, b);
    FAIL() << "expected IllConditionedError";
  } catch (const pskk::IllConditionedError& e) {
    EXPECT_LT(e.min_symbol_modulus(), 1e-10);
  }
}

TEST(SolveCirculant, NullModesWithoutRhsContentAreDropped) {
  // Same singular matrix, but the rhs lies in its range: the solve succeeds
  // on the resolvable eigenspace and reports the truncation.
  const std::vector<double> row(8, 1.0);
  const std::vector<double> b(8, 2.0);
  pskk::CirculantSolveInfo info;
  const auto c = pskk::solve_circulant(row, b, &info);
  EXPECT_EQ(info.truncated_modes, 7u);
  for (double v : c) EXPECT_NEAR(v, 0.25, 1e-13);  // row sum 8, b 2
}

TEST(SolveCirculant, SizeMismatchRejected) {
  EXPECT_THROW(pskk::solve_circulant({1.0, 2.0}, {1.0}), pskk::ConfigError);
  EXPECT_THROW(pskk::solve_circulant({}, {}), pskk::ConfigError);
}

}  // namespace
