#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>

#include "pskk/bernoulli.hpp"
#include "pskk/errors.hpp"

namespace pskk {

//! Parameters of the scaled Korobov kernel on the box [-a, a]^d: smoothness
//! order alpha, box half-width a, dimension d.
struct KernelParams {
  int alpha = 2;
  double a = 1.0;
  int d = 1;

  KernelParams() = default;
  KernelParams(int alpha_, double a_, int d_) : alpha(alpha_), a(a_), d(d_) { validate(); }

  void validate() const {
    if (alpha < 1) throw UnsupportedOrderError("KernelParams: alpha must be >= 1");
    if (alpha > kMaxBernoulliDegree / 4) {
      // The L2 Gram entries need B_{4*alpha}; exact coefficients stop at degree 12.
      throw UnsupportedOrderError("KernelParams: alpha = " + std::to_string(alpha) +
                                  " unsupported, exact coefficients cover alpha <= " +
                                  std::to_string(kMaxBernoulliDegree / 4));
    }
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("KernelParams: half-width a must be positive");
    if (d < 1) throw ConfigError("KernelParams: dimension must be >= 1");
  }
};

namespace detail {

//! One coordinate factor offset + scale * B_degree(u), u in [0, 1], evaluated
//! by Horner over the pre-scaled coefficients.
class CoordFactor {
 public:
  CoordFactor() = default;

  CoordFactor(int degree, double offset, double scale) : offset_(offset), size_(degree + 1) {
    const auto& c = bernoulli_tables().poly_float[degree];
    for (int i = 0; i <= degree; ++i) coeff_[i] = scale * c[i];
  }

  double operator()(double u) const {
    double r = coeff_[0];
    for (int i = 1; i < size_; ++i) r = r * u + coeff_[i];
    return offset_ + r;
  }

 private:
  double coeff_[kMaxBernoulliDegree + 1] = {};
  double offset_ = 0.0;
  int size_ = 1;
};

}  // namespace detail

//! Evaluator for the scaled Korobov kernel
//!
//!   K(x, y) = prod_j [ (2a)^-2 + (-1)^(alpha+1) (2a)^(2alpha-1) B_{2alpha}(|x_j-y_j|/(2a)) / (2alpha)! ]
//!
//! and its L2([-a,a]^d) inner products
//!
//!   <K(x,.), K(y,.)> = prod_j [ (2a)^-3 - (2a)^(4alpha-1) B_{4alpha}(|x_j-y_j|/(2a)) / (4alpha)! ].
//!
//! The (2a)-power/factorial scale factors are formed once in log space, so the
//! per-coordinate work in hot loops is a short Horner chain.
class ScaledKorobovKernel {
 public:
  explicit ScaledKorobovKernel(const KernelParams& kp) : kp_(kp) {
    kp_.validate();
    const double log_2a = std::log(2.0 * kp_.a);
    inv_2a_ = 1.0 / (2.0 * kp_.a);
    const double sign = (kp_.alpha % 2 == 0) ? -1.0 : 1.0;  // (-1)^(alpha+1)
    const double kernel_scale = sign * std::exp((2.0 * kp_.alpha - 1.0) * log_2a - std::lgamma(2.0 * kp_.alpha + 1.0));
    const double l2_scale = -std::exp((4.0 * kp_.alpha - 1.0) * log_2a - std::lgamma(4.0 * kp_.alpha + 1.0));
    eval_factor_ = detail::CoordFactor(2 * kp_.alpha, inv_2a_ * inv_2a_, kernel_scale);
    l2_factor_ = detail::CoordFactor(4 * kp_.alpha, inv_2a_ * inv_2a_ * inv_2a_, l2_scale);
  }

  const KernelParams& params() const { return kp_; }

  //! Per-coordinate kernel factor as a function of the coordinate difference.
  double eval_factor(double diff) const { return eval_factor_(std::abs(diff) * inv_2a_); }
  //! Per-coordinate L2 product factor.
  double l2_factor(double diff) const { return l2_factor_(std::abs(diff) * inv_2a_); }

  //! K(x, y) without domain checks; x, y must already lie in the box.
  double eval_unchecked(std::span<const double> x, std::span<const double> y) const {
    double p = 1.0;
    for (int j = 0; j < kp_.d; ++j) p *= eval_factor(x[j] - y[j]);
    return p;
  }

  double l2_unchecked(std::span<const double> x, std::span<const double> y) const {
    double p = 1.0;
    for (int j = 0; j < kp_.d; ++j) p *= l2_factor(x[j] - y[j]);
    return p;
  }

  double eval(std::span<const double> x, std::span<const double> y) const {
    check_point(x);
    check_point(y);
    return eval_unchecked(x, y);
  }

  double l2_inner(std::span<const double> x, std::span<const double> y) const {
    check_point(x);
    check_point(y);
    return l2_unchecked(x, y);
  }

  void check_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != kp_.d) {
      throw ConfigError("ScaledKorobovKernel: point dimension " + std::to_string(x.size()) +
                        " does not match kernel dimension " + std::to_string(kp_.d));
    }
    for (double v : x) {
      if (!(std::abs(v) <= kp_.a)) {
        throw DomainError("ScaledKorobovKernel: coordinate " + std::to_string(v) + " outside [-" +
                          std::to_string(kp_.a) + ", " + std::to_string(kp_.a) + "]");
      }
    }
  }

 private:
  KernelParams kp_;
  double inv_2a_ = 1.0;
  detail::CoordFactor eval_factor_;
  detail::CoordFactor l2_factor_;
};

inline double kernel_eval(const KernelParams& kp, std::span<const double> x, std::span<const double> y) {
  return ScaledKorobovKernel(kp).eval(x, y);
}

inline double kernel_l2_inner(const KernelParams& kp, std::span<const double> x, std::span<const double> y) {
  return ScaledKorobovKernel(kp).l2_inner(x, y);
}

//! Partial sum of the kernel's Fourier series over all frequencies h with
//! ||h||_inf <= H, using the weights r(0) = sqrt(2a), r(h) = |pi h / a|^alpha.
//! The per-coordinate sums are accumulated in complex arithmetic and the
//! residual imaginary part is required to cancel below 1e-12.
inline double kernel_series_oracle(const KernelParams& kp, std::span<const double> x,
                                   std::span<const double> y, long truncation) {
  kp.validate();
  if (truncation < 0) throw ConfigError("kernel_series_oracle: truncation bound must be >= 0");
  ScaledKorobovKernel kernel(kp);  // reuses the domain checks
  kernel.check_point(x);
  kernel.check_point(y);

  const double two_a = 2.0 * kp.a;
  std::complex<double> product(1.0, 0.0);
  for (int j = 0; j < kp.d; ++j) {
    // h = 0 term: r(0)^-2 * phi_0(x) * conj(phi_0(y)) = (2a)^-2.
    std::complex<double> s(1.0 / (two_a * two_a), 0.0);
    const double phase = 2.0 * std::numbers::pi * (x[j] - y[j]) / two_a;
    for (long h = 1; h <= truncation; ++h) {
      const double weight = std::pow(kp.a / (std::numbers::pi * h), 2.0 * kp.alpha) / two_a;
      const std::complex<double> e(std::cos(phase * h), std::sin(phase * h));
      s += weight * (e + std::conj(e));
    }
    product *= s;
  }
  if (std::abs(product.imag()) > 1e-12 * std::max(1.0, std::abs(product.real()))) {
    throw NumericError("kernel_series_oracle: imaginary part failed to cancel");
  }
  return product.real();
}

}  // namespace pskk
