#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pskk/errors.hpp"

namespace pskk {

//! Largest Bernoulli polynomial degree backed by exact rational coefficients.
inline constexpr int kMaxBernoulliDegree = 12;

//! Exact rational with 64-bit components, always reduced, denominator > 0.
//! Sufficient for all Bernoulli data up to degree 12; arithmetic overflows
//! are detected rather than wrapped.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw NumericError("Rational: division by zero");
    return from_i128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  static Rational from_i128(__int128 num, __int128 den) {
    if (den == 0) throw NumericError("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) throw NumericError("Rational: 64-bit overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    Rational r = from_i128(num_, den_);
    num_ = r.num_;
    den_ = r.den_;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

//! Bernoulli polynomial of degree k with exact rational coefficients in
//! descending powers of x: coefficients[j] multiplies x^(k-j).
struct BernoulliPoly {
  int degree = 0;
  std::vector<Rational> coefficients;
};

namespace detail {

inline std::vector<std::vector<Rational>> make_binomials(int n) {
  std::vector<std::vector<Rational>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(i + 1, Rational(1));
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

//! Bernoulli numbers B_0..B_max from sum_{j<=m} C(m+1,j) B_j = 0, B_1 = -1/2.
inline std::vector<Rational> make_bernoulli_numbers(int max_degree) {
  auto binom = make_binomials(max_degree + 1);
  std::vector<Rational> b(max_degree + 1);
  b[0] = Rational(1);
  for (int m = 1; m <= max_degree; ++m) {
    Rational s(0);
    for (int j = 0; j < m; ++j) s = s + binom[m + 1][j] * b[j];
    b[m] = -s / Rational(m + 1);
  }
  return b;
}

struct BernoulliTables {
  std::vector<Rational> numbers;
  std::vector<BernoulliPoly> polys;            // index = degree
  std::vector<std::vector<double>> poly_float;  // coefficients as doubles

  BernoulliTables() {
    numbers = make_bernoulli_numbers(kMaxBernoulliDegree);
    auto binom = make_binomials(kMaxBernoulliDegree);
    polys.resize(kMaxBernoulliDegree + 1);
    poly_float.resize(kMaxBernoulliDegree + 1);
    for (int k = 0; k <= kMaxBernoulliDegree; ++k) {
      BernoulliPoly p;
      p.degree = k;
      p.coefficients.resize(k + 1);
      // B_k(x) = sum_j C(k,j) B_j x^(k-j); index j holds the x^(k-j) coefficient.
      for (int j = 0; j <= k; ++j) p.coefficients[j] = binom[k][j] * numbers[j];
      poly_float[k].resize(k + 1);
      for (int j = 0; j <= k; ++j) poly_float[k][j] = p.coefficients[j].to_double();
      polys[k] = std::move(p);
    }
  }
};

inline const BernoulliTables& bernoulli_tables() {
  static const BernoulliTables tables;  // built once, thread-safe
  return tables;
}

inline double horner(const std::vector<double>& coeffs, double x) {
  double r = coeffs[0];
  for (std::size_t i = 1; i < coeffs.size(); ++i) r = r * x + coeffs[i];
  return r;
}

}  // namespace detail

inline const Rational& bernoulli_number(int k) {
  if (k < 0 || k > kMaxBernoulliDegree) {
    throw UnsupportedOrderError("bernoulli_number: degree " + std::to_string(k) +
                                " outside supported range [0, " + std::to_string(kMaxBernoulliDegree) + "]");
  }
  return detail::bernoulli_tables().numbers[k];
}

inline const BernoulliPoly& bernoulli_poly(int degree) {
  if (degree < 0 || degree > kMaxBernoulliDegree) {
    throw UnsupportedOrderError("bernoulli_poly: degree " + std::to_string(degree) +
                                " outside supported range [0, " + std::to_string(kMaxBernoulliDegree) + "]");
  }
  return detail::bernoulli_tables().polys[degree];
}

//! Evaluates B_k(x) for x in [0, 1] by Horner's scheme over the exact
//! coefficients converted once to double.
inline double bernoulli_polynomial(int degree, double x) {
  if (degree < 0 || degree > kMaxBernoulliDegree) {
    throw UnsupportedOrderError("bernoulli_polynomial: degree " + std::to_string(degree) +
                                " outside supported range [0, " + std::to_string(kMaxBernoulliDegree) + "]");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("bernoulli_polynomial: argument " + std::to_string(x) + " outside [0, 1]");
  }
  return detail::horner(detail::bernoulli_tables().poly_float[degree], x);
}

}  // namespace pskk
