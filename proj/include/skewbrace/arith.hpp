#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "skewbrace/error.hpp"

namespace skewbrace::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Least non-negative residue of a modulo m (m > 0).
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<__int128>(a) * b) % m);
}

/// base^exp, or nullopt on overflow past 2^62.
inline std::optional<i64> checked_pow(i64 base, i64 exp) {
  constexpr i64 limit = i64{1} << 62;
  i64 r = 1;
  for (i64 i = 0; i < exp; ++i) {
    if (r > limit / base) return std::nullopt;
    r *= base;
  }
  return r;
}

inline i64 ipow(i64 base, i64 exp) {
  auto r = checked_pow(base, exp);
  if (!r) throw BoundExceeded("integer power exceeds 2^62");
  return *r;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(i64 a, i64 p) {
  int v = 0;
  if (a == 0) return std::numeric_limits<int>::max();
  if (a < 0) a = -a;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

/// Exact binomial coefficient; throws if it does not fit in 63 bits.
inline i64 binomial(i64 n, i64 k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 r = 1;
  for (i64 i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > std::numeric_limits<i64>::max()) throw BoundExceeded("binomial overflow");
  }
  return static_cast<i64>(r);
}

/// If n is a power of p (including p^0 = 1) returns the exponent.
inline std::optional<int> log_exact(u64 n, u64 p) {
  if (n == 0) return std::nullopt;
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  if (n != 1) return std::nullopt;
  return e;
}

/// Inverse of a modulo p (p prime, a not divisible by p).
inline i64 inverse_mod_prime(i64 a, i64 p) {
  i64 r = 1, b = mod(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

}  // namespace skewbrace::arith
