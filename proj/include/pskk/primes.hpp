#pragma once

#include <cstdint>

#include "pskk/errors.hpp"

namespace pskk {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

}  // namespace detail

//! Deterministic Miller-Rabin; the fixed witness set decides primality for
//! every n below 2^64.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint64_t next_prime_at_or_above(std::uint64_t n) {
  if (n <= 2) return 2;
  if (n % 2 == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

inline std::uint64_t prev_prime_at_or_below(std::uint64_t n) {
  if (n < 2) throw ConfigError("prev_prime_at_or_below: no prime below 2");
  if (n == 2) return 2;
  if (n % 2 == 0) --n;
  while (n >= 3 && !is_prime(n)) n -= 2;
  return n >= 3 ? n : 2;
}

}  // namespace pskk
