#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "pskk/errors.hpp"
#include "pskk/points.hpp"

namespace pskk {

inline constexpr int kSobolMaxDim = 16;
inline constexpr int kSobolMaxLog2 = 20;

namespace detail {

//! Primitive polynomial data (degree s, interior coefficient bits a, initial
//! direction integers m) for dimensions 2..16, from the Joe-Kuo "new-joe-kuo-6"
//! direction number tables. Dimension 1 is the van der Corput sequence in
//! base 2 (all m = 1). An FNV-1a checksum of this table is pinned in the test
//! suite.
struct SobolDim {
  int s;
  std::uint32_t a;
  std::array<std::uint32_t, 6> m;
};

inline constexpr std::array<SobolDim, 15> kSobolDims = {{
    {1, 0, {1, 0, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0, 0}},
    {4, 4, {1, 3, 5, 13, 0, 0}},
    {5, 2, {1, 1, 5, 5, 17, 0}},
    {5, 4, {1, 1, 5, 5, 5, 0}},
    {5, 7, {1, 1, 7, 11, 19, 0}},
    {5, 11, {1, 1, 5, 1, 1, 0}},
    {5, 13, {1, 1, 1, 3, 11, 0}},
    {5, 14, {1, 3, 5, 5, 31, 0}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

//! 32-bit direction integers v[i] = m_i 2^(32-i) for one dimension.
inline std::array<std::uint32_t, 32> sobol_directions(int dim_index) {
  std::array<std::uint32_t, 32> v{};
  if (dim_index == 0) {
    for (int i = 0; i < 32; ++i) v[i] = 1u << (31 - i);
    return v;
  }
  const SobolDim& rec = kSobolDims[dim_index - 1];
  const int s = rec.s;
  for (int i = 0; i < s; ++i) v[i] = rec.m[i] << (31 - i);
  for (int i = s; i < 32; ++i) {
    v[i] = v[i - s] ^ (v[i - s] >> s);
    for (int k = 1; k < s; ++k) {
      if ((rec.a >> (s - 1 - k)) & 1u) v[i] ^= v[i - k];
    }
  }
  return v;
}

}  // namespace detail

//! The first 2^t points of a d-dimensional Sobol' sequence.
struct SobolGrid {
  int d = 0;
  int t = 0;
  PointSet points;
};

//! Gray-code generator: the sequence starts at the origin and each point
//! differs from its predecessor in one direction integer. The first 2^s
//! points of every coordinate hit each dyadic interval of width 2^-s exactly
//! once.
inline SobolGrid sobol_points(int d, int t) {
  if (d < 1 || d > kSobolMaxDim) {
    throw ConfigError("sobol_points: dimension " + std::to_string(d) + " outside [1, " +
                      std::to_string(kSobolMaxDim) + "]");
  }
  if (t < 0 || t > kSobolMaxLog2) {
    throw ConfigError("sobol_points: log2 count " + std::to_string(t) + " outside [0, " +
                      std::to_string(kSobolMaxLog2) + "]");
  }

  std::vector<std::array<std::uint32_t, 32>> dirs(d);
  for (int j = 0; j < d; ++j) dirs[j] = detail::sobol_directions(j);

  const std::size_t count = std::size_t{1} << t;
  SobolGrid grid;
  grid.d = d;
  grid.t = t;
  grid.points = PointSet(count, d);

  std::vector<std::uint32_t> state(d, 0u);
  constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
  for (std::size_t k = 0; k < count; ++k) {
    auto row = grid.points.row(k);
    for (int j = 0; j < d; ++j) row[j] = static_cast<double>(state[j]) * scale;
    // Index of the lowest zero bit of k drives the Gray-code update.
    int c = 0;
    std::size_t kk = k;
    while (kk & 1u) {
      kk >>= 1;
      ++c;
    }
    for (int j = 0; j < d; ++j) state[j] ^= dirs[j][c];
  }
  return grid;
}

}  // namespace pskk
