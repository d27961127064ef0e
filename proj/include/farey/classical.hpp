#pragma once

// Closed formulas for the congruence subgroups Gamma0(N).

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "farey/errors.hpp"

namespace farey::classical {

using u64 = std::uint64_t;

/// Prime factorization by trial division, as (prime, exponent) pairs.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

struct Gamma0Data {
  u64 index = 0;
  u64 nu2 = 0;
  u64 nu3 = 0;
  u64 cusps = 0;
  u64 genus = 0;
  friend bool operator==(const Gamma0Data&, const Gamma0Data&) = default;
};

inline void check_level(long long n) {
  if (n <= 0) throw Error(ErrorKind::InvalidLevel, "level must be positive");
}

inline u64 gamma0_index(u64 n) {
  u64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p + 1);
  return r;
}

/// Cusp widths N / gcd(d^2, N), one per divisor class d | N, repeated
/// phi(gcd(d, N/d)) times.
inline std::vector<u64> gamma0_cusp_widths(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d <= n; ++d) {
    if (n % d) continue;
    const u64 k = euler_phi(std::gcd(d, n / d));
    const u64 w = n / std::gcd(d * d, n);
    for (u64 i = 0; i < k; ++i) out.push_back(w);
  }
  return out;
}

inline Gamma0Data gamma0_data(long long level) {
  check_level(level);
  const u64 n = static_cast<u64>(level);
  Gamma0Data r;
  r.index = gamma0_index(n);
  const auto fac = factorize(n);
  r.nu2 = n % 4 == 0 ? 0 : 1;
  r.nu3 = n % 9 == 0 ? 0 : 1;
  for (auto [p, e] : fac) {
    // (-1/p) and (-3/p)
    const int chi4 = p == 2 ? 0 : (p % 4 == 1 ? 1 : -1);
    const int chi3 = p == 3 ? 0 : (p % 3 == 1 ? 1 : -1);
    r.nu2 *= static_cast<u64>(1 + chi4);
    r.nu3 *= static_cast<u64>(1 + chi3);
  }
  for (u64 d = 1; d <= n; ++d) {
    if (n % d == 0) r.cusps += euler_phi(std::gcd(d, n / d));
  }
  // 12 g = 12 + index - 3 nu2 - 4 nu3 - 6 cusps
  const long long twelve_g = 12 + static_cast<long long>(r.index) -
                             3 * static_cast<long long>(r.nu2) -
                             4 * static_cast<long long>(r.nu3) -
                             6 * static_cast<long long>(r.cusps);
  r.genus = static_cast<u64>(twelve_g / 12);
  return r;
}

}  // namespace farey::classical
