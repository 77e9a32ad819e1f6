#include "pskk/bernoulli.hpp"

#include <gtest/gtest.h>

namespace {

using pskk::Rational;

TEST(Rational, BasicArithmetic) {
  Rational a(1, 6), b(-1, 2);
  EXPECT_EQ(a + b, Rational(-1, 3));
  EXPECT_EQ(a * b, Rational(-1, 12));
  EXPECT_EQ((a / b), Rational(-1, 3));
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(3, -6), Rational(-1, 2));
  EXPECT_DOUBLE_EQ(Rational(7, 240).to_double(), 7.0 / 240.0);
}

TEST(BernoulliNumbers, KnownValues) {
  EXPECT_EQ(pskk::bernoulli_number(0), Rational(1));
  EXPECT_EQ(pskk::bernoulli_number(1), Rational(-1, 2));
  EXPECT_EQ(pskk::bernoulli_number(2), Rational(1, 6));
  EXPECT_EQ(pskk::bernoulli_number(4), Rational(-1, 30));
  EXPECT_EQ(pskk::bernoulli_number(6), Rational(1, 42));
  EXPECT_EQ(pskk::bernoulli_number(8), Rational(-1, 30));
  EXPECT_EQ(pskk::bernoulli_number(10), Rational(5, 66));
  EXPECT_EQ(pskk::bernoulli_number(12), Rational(-691, 2730));
  EXPECT_EQ(pskk::bernoulli_number(7), Rational(0));
}

TEST(BernoulliPolynomial, SpecValues) {
  EXPECT_DOUBLE_EQ(pskk::bernoulli_polynomial(2, 0.0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(pskk::bernoulli_polynomial(2, 1.0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(pskk::bernoulli_polynomial(4, 0.5), 7.0 / 240.0);
  // B_4(x) = x^4 - 2x^3 + x^2 - 1/30 at a generic point.
  const double x = 0.3;
  EXPECT_NEAR(pskk::bernoulli_polynomial(4, x), x * x * x * x - 2 * x * x * x + x * x - 1.0 / 30.0, 1e-16);
}

TEST(BernoulliPolynomial, PeriodicityAtEndpoints) {
  for (int k = 2; k <= pskk::kMaxBernoulliDegree; ++k) {
    // Exact form of B_k(0) = B_k(1): the constant term equals the sum of all
    // coefficients, checked in rational arithmetic.
    const auto& poly = pskk::bernoulli_poly(k);
    Rational at_one(0);
    for (const auto& c : poly.coefficients) at_one = at_one + c;
    EXPECT_EQ(at_one, poly.coefficients.back()) << "degree " << k;
    // Horner evaluation reproduces it up to rounding.
    EXPECT_NEAR(pskk::bernoulli_polynomial(k, 0.0), pskk::bernoulli_polynomial(k, 1.0), 1e-15)
        << "degree " << k;
  }
}

TEST(BernoulliPolynomial, UnitIntegralVanishesExactly) {
  // integral_0^1 B_k = sum_j coeff_j / (power_j + 1), evaluated in exact
  // rational arithmetic.
  for (int k = 1; k <= pskk::kMaxBernoulliDegree; ++k) {
    const auto& poly = pskk::bernoulli_poly(k);
    Rational integral(0);
    for (int j = 0; j <= k; ++j) {
      const int power = k - j;
      integral = integral + poly.coefficients[j] / Rational(power + 1);
    }
    EXPECT_EQ(integral, Rational(0)) << "degree " << k;
  }
}

TEST(BernoulliPolynomial, RejectsOutOfRange) {
  EXPECT_THROW(pskk::bernoulli_polynomial(13, 0.5), pskk::UnsupportedOrderError);
  EXPECT_THROW(pskk::bernoulli_polynomial(-1, 0.5), pskk::UnsupportedOrderError);
  EXPECT_THROW(pskk::bernoulli_polynomial(2, -0.1), pskk::DomainError);
  EXPECT_THROW(pskk::bernoulli_polynomial(2, 1.1), pskk::DomainError);
}

}  // namespace
