#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pskk/errors.hpp"

namespace pskk {

namespace fft {

using Complex = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

//! Iterative radix-2 transform, in place; size must be a power of two.
//! Forward uses the e^{-2 pi i jk/n} convention; inverse divides by n.
inline void radix2_inplace(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw ConfigError("radix2_inplace: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        Complex u = a[i + k];
        Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

namespace detail {

//! Bluestein's reduction of an arbitrary-length DFT to a power-of-two cyclic
//! convolution. The chirp exponent is taken mod 2n to keep the phase argument
//! small.
inline std::vector<Complex> bluestein_forward(const std::vector<Complex>& a) {
  const std::size_t n = a.size();
  std::vector<Complex> chirp(n);  // chirp[k] = exp(-i pi k^2 / n)
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t e = (static_cast<std::uint64_t>(k) * k) % (2 * n);
    const double ang = -std::numbers::pi * static_cast<double>(e) / static_cast<double>(n);
    chirp[k] = Complex(std::cos(ang), std::sin(ang));
  }
  std::size_t conv_len = 1;
  while (conv_len < 2 * n - 1) conv_len <<= 1;

  std::vector<Complex> u(conv_len, Complex(0.0, 0.0));
  std::vector<Complex> v(conv_len, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
  v[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    v[k] = std::conj(chirp[k]);
    v[conv_len - k] = std::conj(chirp[k]);
  }
  radix2_inplace(u, false);
  radix2_inplace(v, false);
  for (std::size_t k = 0; k < conv_len; ++k) u[k] *= v[k];
  radix2_inplace(u, true);

  std::vector<Complex> out(n);
  for (std::size_t l = 0; l < n; ++l) out[l] = chirp[l] * u[l];
  return out;
}

}  // namespace detail

//! Discrete Fourier transform of any length (radix-2 when possible, Bluestein
//! otherwise). The inverse transform includes the 1/n factor.
inline std::vector<Complex> dft(std::vector<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0) throw ConfigError("dft: empty input");
  if (is_pow2(n)) {
    radix2_inplace(a, inverse);
    return a;
  }
  if (!inverse) return detail::bluestein_forward(a);
  for (auto& x : a) x = std::conj(x);
  auto out = detail::bluestein_forward(a);
  for (auto& x : out) x = std::conj(x) / static_cast<double>(n);
  return out;
}

inline std::vector<Complex> dft_real(const std::vector<double>& a, bool inverse) {
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = Complex(a[i], 0.0);
  return dft(std::move(c), inverse);
}

}  // namespace fft

//! y = A x for the circulant matrix A_{j,k} = row[(k - j) mod n], computed
//! directly in O(n^2). Used for residual checks independently of the FFT path.
inline std::vector<double> circulant_multiply(const std::vector<double>& row, const std::vector<double>& x) {
  const std::size_t n = row.size();
  if (x.size() != n) throw ConfigError("circulant_multiply: size mismatch");
  std::vector<double> y(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += row[(k + n - j) % n] * x[k];
    y[j] = s;
  }
  return y;
}

//! Diagnostics from a circulant solve. `truncated_modes` counts symbol
//! entries below the resolvability floor that were treated as null
//! directions; `truncated_rhs_sup` bounds the residual contribution of the
//! rhs content discarded with them.
struct CirculantSolveInfo {
  double min_symbol_modulus = 0.0;
  double max_symbol_modulus = 0.0;
  std::size_t truncated_modes = 0;
  double truncated_rhs_sup = 0.0;
};

//! Solves A c = b where A is the symmetric circulant generated by `row`
//! (first row, A_{j,k} = row[(k - j) mod n]) by diagonalizing with the DFT:
//! c = F diag(1/symbol) F^{-1} b.
//!
//! The symbol of a symmetric circulant is real, so its computed imaginary
//! parts are rounding noise and are dropped, and the transformed rhs is
//! conjugate-symmetrized; this keeps the recovered solution real without
//! amplifying noise through tiny eigenvalues. Symbol entries below
//! 1e-14 * max are unresolvable in double precision and become null
//! directions: the solve proceeds on the resolvable eigenspace as long as the
//! rhs carries only negligible energy there (the kernel pipeline's rhs decays
//! with the symbol, so legitimate systems sit many orders below the guard),
//! and raises IllConditionedError, with the minimal modulus, when the rhs has
//! real content in the null modes.
inline std::vector<double> solve_circulant(const std::vector<double>& row, const std::vector<double>& b,
                                           CirculantSolveInfo* info = nullptr) {
  const std::size_t n = row.size();
  if (n == 0) throw ConfigError("solve_circulant: empty system");
  if (b.size() != n) throw ConfigError("solve_circulant: size mismatch between row and rhs");

  const auto raw_symbol = fft::dft_real(row, false);
  std::vector<double> symbol(n);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t mirror = (n - l) % n;
    symbol[l] = 0.5 * (raw_symbol[l].real() + raw_symbol[mirror].real());
  }
  double min_mod = std::numeric_limits<double>::infinity();
  double max_mod = 0.0;
  for (double s : symbol) {
    min_mod = std::min(min_mod, std::abs(s));
    max_mod = std::max(max_mod, std::abs(s));
  }
  const double floor = 1e-14 * max_mod;

  auto t = fft::dft_real(b, true);
  t[0] = fft::Complex(t[0].real(), 0.0);
  for (std::size_t l = 1; 2 * l <= n; ++l) {
    const std::size_t mirror = n - l;
    const fft::Complex avg = 0.5 * (t[l] + std::conj(t[mirror]));
    t[l] = avg;
    t[mirror] = std::conj(avg);
  }

  double max_t = 0.0;
  for (const auto& v : t) max_t = std::max(max_t, std::abs(v));
  std::size_t truncated = 0;
  double truncated_sup = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    if (std::abs(symbol[l]) < floor) {
      const double content = std::abs(t[l]);
      if (content > 1e-6 * max_t) {
        throw IllConditionedError(
            "solve_circulant: circulant symbol nearly singular with rhs content in the null modes "
            "(min modulus " + std::to_string(min_mod) + ", max modulus " + std::to_string(max_mod) + ")",
            min_mod);
      }
      truncated_sup += content;
      ++truncated;
      t[l] = fft::Complex(0.0, 0.0);
    } else {
      t[l] /= symbol[l];
    }
  }
  auto c = fft::dft(std::move(t), false);

  double max_real = 0.0;
  double max_imag = 0.0;
  for (const auto& v : c) {
    max_real = std::max(max_real, std::abs(v.real()));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  if (max_imag > 1e-10 * std::max(1.0, max_real)) {
    throw NumericError("solve_circulant: imaginary residue " + std::to_string(max_imag) +
                       " exceeds tolerance");
  }
  if (info) {
    info->min_symbol_modulus = min_mod;
    info->max_symbol_modulus = max_mod;
    info->truncated_modes = truncated;
    info->truncated_rhs_sup = truncated_sup;
  }
  std::vector<double> out(n);
  for (std::size_t l = 0; l < n; ++l) out[l] = c[l].real();
  return out;
}

}  // namespace pskk
