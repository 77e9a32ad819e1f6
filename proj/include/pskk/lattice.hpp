#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pskk/bernoulli.hpp"
#include "pskk/errors.hpp"
#include "pskk/fft.hpp"
#include "pskk/parallel.hpp"
#include "pskk/points.hpp"
#include "pskk/primes.hpp"

namespace pskk {

//! Rank-1 lattice rule: generating vector z (components in {1,..,n-1}) and a
//! prime point count n.
struct Lattice {
  std::vector<std::uint64_t> z;
  std::uint64_t n = 0;

  Lattice() = default;
  Lattice(std::vector<std::uint64_t> z_, std::uint64_t n_) : z(std::move(z_)), n(n_) { validate(); }

  std::size_t dim() const { return z.size(); }

  void validate() const {
    if (z.empty()) throw InvalidLatticeError("Lattice: empty generating vector");
    if (n == 1) {
      // Degenerate single-node rule (scalar system); components fixed at 1.
      for (std::uint64_t zj : z) {
        if (zj != 1) throw InvalidLatticeError("Lattice: n = 1 requires all components equal to 1");
      }
      return;
    }
    if (!is_prime(n)) {
      throw InvalidLatticeError("Lattice: point count " + std::to_string(n) + " is not prime");
    }
    for (std::uint64_t zj : z) {
      if (zj < 1 || zj > n - 1) {
        throw InvalidLatticeError("Lattice: component " + std::to_string(zj) + " outside [1, " +
                                  std::to_string(n - 1) + "]");
      }
    }
  }
};

namespace detail {

//! Values of g_s(m/n) = sum_{h != 0} |2 pi h|^{-s} e^{2 pi i h m / n} on the
//! lattice grid. Even s has the Bernoulli closed form; odd s is summed over
//! aliased frequency classes and transformed once.
inline std::vector<double> cbc_weight_table(std::uint64_t n, int s) {
  std::vector<double> g(n);
  if (s % 2 == 0) {
    const double sign = (s / 2) % 2 == 0 ? -1.0 : 1.0;  // (-1)^(s/2 + 1)
    const double scale = sign * std::exp(-std::lgamma(s + 1.0));
    const auto& coeffs = bernoulli_tables().poly_float[s];
    for (std::uint64_t m = 0; m < n; ++m) {
      g[m] = scale * horner(coeffs, static_cast<double>(m) / static_cast<double>(n));
    }
    return g;
  }
  // Aliased coefficients F_r = sum_{h = r mod n} |2 pi h|^{-s}; the grid
  // values are their length-n Fourier synthesis.
  const std::uint64_t h_max = std::max<std::uint64_t>(200000, 50 * n);
  std::vector<double> aliased(n, 0.0);
  for (std::uint64_t h = 1; h <= h_max; ++h) {
    const double w = std::pow(2.0 * std::numbers::pi * static_cast<double>(h), -static_cast<double>(s));
    aliased[h % n] += w;
    aliased[(n - h % n) % n] += w;
  }
  std::vector<fft::Complex> f(n);
  for (std::uint64_t r = 0; r < n; ++r) f[r] = fft::Complex(aliased[r], 0.0);
  const auto synth = fft::dft(std::move(f), true);
  for (std::uint64_t m = 0; m < n; ++m) g[m] = synth[m].real() * static_cast<double>(n);
  return g;
}

//! omega[m] = 1 + g_s(m/n); s = 2 alpha reproduces the Korobov kernel factor
//! entering the squared worst-case integration error.
inline std::vector<double> cbc_omega_table(std::uint64_t n, int alpha) {
  auto omega = cbc_weight_table(n, 2 * alpha);
  for (double& w : omega) w += 1.0;
  return omega;
}

}  // namespace detail

//! Squared worst-case integration error e^2_n(z) of the rank-1 rule in the
//! unit-cube Korobov space of smoothness alpha:
//!   e^2 = -1 + (1/n) sum_k prod_j omega({k z_j / n}).
inline double cbc_criterion(std::span<const std::uint64_t> z, std::uint64_t n, int alpha) {
  if (alpha < 1 || 2 * alpha > kMaxBernoulliDegree) {
    throw UnsupportedOrderError("cbc_criterion: alpha outside supported range");
  }
  if (n != 1 && !is_prime(n)) throw InvalidLatticeError("cbc_criterion: n must be prime");
  const auto omega = detail::cbc_omega_table(n, alpha);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    double prod = 1.0;
    for (std::uint64_t zj : z) prod *= omega[(k * zj) % n];
    sum += prod;
  }
  return -1.0 + sum / static_cast<double>(n);
}

namespace detail {

//! Greedy coordinate-by-coordinate scan over the per-coordinate factor table
//! omega: each z_j minimizes sum_k prod_{i<=j} omega[(k z_i) mod n]. Ties
//! break toward the smallest candidate, stable under permuted floating-point
//! sums.
inline Lattice cbc_greedy(std::size_t d, std::uint64_t n, const std::vector<double>& omega) {
  std::vector<double> prod(n, 1.0);
  std::vector<std::uint64_t> z;
  z.reserve(d);

  std::vector<double> crit(n - 1);
  for (std::size_t j = 0; j < d; ++j) {
    std::uint64_t zj = 1;
    if (j == 0) {
      // Every unit generates the same point multiset in one dimension, so the
      // tie-break selects 1 without a scan.
    } else {
      // Independent candidate evaluations; the argmin scan below is ordered.
      parallel_for(n - 1, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
          const std::uint64_t c = idx + 1;
          double sum = 0.0;
          for (std::uint64_t k = 0; k < n; ++k) sum += prod[k] * omega[(k * c) % n];
          crit[idx] = sum;
        }
      });
      double best = crit[0];
      for (std::size_t idx = 1; idx < n - 1; ++idx) best = std::min(best, crit[idx]);
      // The window covers accumulated rounding of an n-term sum and nothing
      // more.
      const double tie_window = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(best);
      std::size_t pick = 0;
      while (crit[pick] > best + tie_window) ++pick;
      zj = pick + 1;
    }
    z.push_back(zj);
    for (std::uint64_t k = 0; k < n; ++k) prod[k] *= omega[(k * zj) % n];
  }
  return Lattice(std::move(z), n);
}

inline void cbc_check_args(std::size_t d, std::uint64_t n, int alpha) {
  if (d < 1) throw ConfigError("cbc_construct: dimension must be >= 1");
  if (alpha < 1 || 2 * alpha > kMaxBernoulliDegree) {
    throw UnsupportedOrderError("cbc_construct: alpha outside supported range");
  }
  if (n != 1 && !is_prime(n)) {
    throw InvalidLatticeError("cbc_construct: point count " + std::to_string(n) + " is not prime");
  }
}

}  // namespace detail

//! Component-by-component construction minimizing the squared worst-case
//! integration error e^2_n in the unit-cube Korobov space of smoothness
//! alpha. Deterministic for fixed (d, n, alpha).
inline Lattice cbc_construct(std::size_t d, std::uint64_t n, int alpha) {
  detail::cbc_check_args(d, n, alpha);
  if (n == 1) return Lattice(std::vector<std::uint64_t>(d, 1), 1);
  return detail::cbc_greedy(d, n, detail::cbc_omega_table(n, alpha));
}

//! Component-by-component construction tuned for L2 function approximation
//! on the lattice rather than plain integration: the scan weights dual-
//! lattice frequencies by |2 pi h|^{-alpha} (half the kernel's decay), which
//! is what controls the aliasing error of lattice interpolation. At alpha = 1
//! the half-exponent sum diverges, so the integration weights (exponent 2)
//! are the construction for both. The estimator pipeline uses this variant
//! for its default nodes.
inline Lattice cbc_construct_approximation(std::size_t d, std::uint64_t n, int alpha) {
  detail::cbc_check_args(d, n, alpha);
  if (n == 1) return Lattice(std::vector<std::uint64_t>(d, 1), 1);
  const int exponent = std::max(alpha, 2);
  auto omega = detail::cbc_weight_table(n, exponent);
  for (double& w : omega) w += 1.0;
  return detail::cbc_greedy(d, n, omega);
}

//! Lattice points y_k = {k z / n} for k = 1..n; k = n contributes the origin.
//! Coordinates are formed as (k z mod n) / n, so each is an exactly rounded
//! rational with denominator n.
inline PointSet lattice_points(const Lattice& lat) {
  lat.validate();
  const std::size_t d = lat.dim();
  PointSet pts(lat.n, d);
  for (std::uint64_t k = 1; k <= lat.n; ++k) {
    auto row = pts.row(k - 1);
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = static_cast<double>((k * lat.z[j]) % lat.n) / static_cast<double>(lat.n);
    }
  }
  return pts;
}

//! Node set on [-a, a]^d, optionally remembering the lattice it came from.
//! Only lattice-sourced node sets carry the circulant Gram structure.
struct ScaledNodeSet {
  PointSet points;
  double halfwidth = 0.0;
  std::optional<Lattice> source;
};

//! Componentwise linear scaling 2a*y - a from [0,1)^d onto [-a, a)^d.
inline ScaledNodeSet scale_to_box(const PointSet& unit_points, double a) {
  if (!(a > 0.0)) throw ConfigError("scale_to_box: half-width must be positive");
  ScaledNodeSet nodes;
  nodes.halfwidth = a;
  nodes.points = PointSet(unit_points.size(), unit_points.dim());
  for (std::size_t i = 0; i < unit_points.size(); ++i) {
    auto src = unit_points[i];
    auto dst = nodes.points.row(i);
    for (std::size_t j = 0; j < unit_points.dim(); ++j) dst[j] = 2.0 * a * src[j] - a;
  }
  return nodes;
}

inline ScaledNodeSet scale_to_box(const Lattice& lat, double a) {
  ScaledNodeSet nodes = scale_to_box(lattice_points(lat), a);
  nodes.source = lat;
  return nodes;
}

//! Plain text format: first line "n d alpha", second line the d components of z.
inline void save_lattice(const Lattice& lat, int alpha, std::ostream& out) {
  out << lat.n << ' ' << lat.dim() << ' ' << alpha << '\n';
  for (std::size_t j = 0; j < lat.dim(); ++j) out << (j ? " " : "") << lat.z[j];
  out << '\n';
}

inline void save_lattice(const Lattice& lat, int alpha, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("save_lattice: cannot open " + path.string());
  save_lattice(lat, alpha, out);
  if (!out) throw IoError("save_lattice: write failed for " + path.string());
}

struct LatticeFile {
  Lattice lattice;
  int alpha = 0;
};

inline LatticeFile load_lattice(std::istream& in) {
  std::uint64_t n = 0;
  std::size_t d = 0;
  int alpha = 0;
  if (!(in >> n >> d >> alpha)) throw IoError("load_lattice: malformed header line");
  if (d == 0) throw IoError("load_lattice: dimension must be positive");
  std::vector<std::uint64_t> z(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(in >> z[j])) throw IoError("load_lattice: expected " + std::to_string(d) + " components");
  }
  return LatticeFile{Lattice(std::move(z), n), alpha};
}

inline LatticeFile load_lattice(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_lattice: cannot open " + path.string());
  return load_lattice(in);
}

}  // namespace pskk
