#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>

#include "farey/classical.hpp"
#include "farey/exact.hpp"

namespace farey {

/// Membership test for a subgroup of PSL2(Z).
///
/// `coset_key`, when present, must map det-1 matrices M1, M2 to the same
/// value exactly when M1 * M2^-1 is a member. The constructor uses it to
/// find partner arcs by hashing instead of pairwise tests.
struct MembershipOracle {
  std::function<bool(const IMat&)> contains;
  std::optional<std::size_t> index_bound;
  std::function<std::uint64_t(const IMat&)> coset_key;
  std::optional<long long> level;

  bool operator()(const IMat& g) const { return contains(g); }
};

inline MembershipOracle trivial_oracle() {
  MembershipOracle o;
  o.contains = [](const IMat&) { return true; };
  o.index_bound = 1;
  o.level = 1;
  o.coset_key = [](const IMat&) -> std::uint64_t { return 0; };
  return o;
}

namespace detail {

inline std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  long long t = 0, nt = 1;
  long long r = static_cast<long long>(m), nr = static_cast<long long>(a % m);
  while (nr) {
    const long long q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (t < 0) t += static_cast<long long>(m);
  return static_cast<std::uint64_t>(t);
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

/// Canonical representative of (c : d) in P^1(Z/N), packed as c * N + d.
inline std::uint64_t p1_key(std::uint64_t c, std::uint64_t d, std::uint64_t n) {
  if (n == 1) return 0;
  c %= n;
  d %= n;
  if (c == 0) return 1;  // (0 : 1)
  const std::uint64_t g = std::gcd(c, n);
  const std::uint64_t m = n / g;
  std::uint64_t u = mod_inverse(c / g, m);
  while (std::gcd(u, n) != 1) u += m;
  const std::uint64_t d1 = mulmod(u, d, n);
  std::uint64_t best = d1;
  for (std::uint64_t k = 1; k < g; ++k) {
    const std::uint64_t v = 1 + k * m;
    if (std::gcd(v, n) != 1) continue;
    const std::uint64_t cand = mulmod(d1, v, n);
    if (cand < best) best = cand;
  }
  return g * n + best;
}

inline std::uint64_t mod_of(const Int& x, std::uint64_t n) {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), n);
  return r.get_ui();
}

}  // namespace detail

/// Gamma0(N): lower-left entry divisible by N.
inline MembershipOracle gamma0_oracle(long long level) {
  classical::check_level(level);
  const auto n = static_cast<unsigned long>(level);
  MembershipOracle o;
  o.level = level;
  o.index_bound = classical::gamma0_index(n);
  o.contains = [n](const IMat& g) {
    return mpz_divisible_ui_p(g.c.get_mpz_t(), n) != 0;
  };
  o.coset_key = [n](const IMat& g) {
    return detail::p1_key(detail::mod_of(g.c, n), detail::mod_of(g.d, n), n);
  };
  return o;
}

}  // namespace farey
