#pragma once

// Extended Farey symbols: a convex polygon with vertices in P^1(Q), an
// involution on its sides, and elliptic orders on the fixed sides.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "farey/errors.hpp"
#include "farey/exact.hpp"
#include "farey/oracle.hpp"

namespace farey {

enum class ArcClass { Hyperbolic, Parabolic, Elliptic2, Elliptic3 };

inline const char* to_string(ArcClass c) {
  switch (c) {
    case ArcClass::Hyperbolic: return "hyperbolic";
    case ArcClass::Parabolic: return "parabolic";
    case ArcClass::Elliptic2: return "elliptic2";
    case ArcClass::Elliptic3: return "elliptic3";
  }
  return "?";
}

struct Block {
  enum class Kind { Quad, Pair, Fixed };
  Kind kind;
  std::size_t start;  ///< arc index in the original (unrotated) numbering
  std::size_t length() const { return kind == Kind::Quad ? 4 : kind == Kind::Pair ? 2 : 1; }
  friend bool operator==(const Block&, const Block&) = default;
};

/// Blocks listed in cyclic order starting at arc `offset`.
struct FactorDecomposition {
  std::size_t offset = 0;
  std::vector<Block> blocks;

  std::size_t count(Block::Kind k) const {
    return static_cast<std::size_t>(
        std::count_if(blocks.begin(), blocks.end(), [k](const Block& b) { return b.kind == k; }));
  }
};

/// The combinatorial part of a symbol: pairing plus elliptic orders.
/// Normalization predicates only need this.
struct Collier {
  std::vector<std::size_t> pairing;
  std::vector<int> ell;  ///< 0, 2 or 3 per arc

  std::size_t size() const { return pairing.size(); }
  bool fixed(std::size_t i) const { return pairing[i] == i; }

  std::size_t distance(std::size_t i, std::size_t j) const {
    const std::size_t n = size();
    const std::size_t a = (i + n - j) % n, b = (j + n - i) % n;
    return std::min(a, b);
  }

  bool is_linked(std::size_t i, std::size_t j) const {
    if (fixed(i) || fixed(j)) {
      throw Error(ErrorKind::InvalidQuery, "linkedness is undefined for fixed arcs");
    }
    if (i == j || pairing[i] == j) return false;
    const std::size_t n = size();
    // j and j* separated by the chord (i, i*)
    auto inside = [&](std::size_t x) {
      return (x + n - i) % n < (pairing[i] + n - i) % n;
    };
    return inside(j) != inside(pairing[j]);
  }

  /// Smallest arc index breaking the normalized-form rule, if any.
  std::optional<std::size_t> first_violation() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed(i)) continue;
      const std::size_t d = distance(i, pairing[i]);
      if (d > 2) return i;
      if (d == 2) {
        // exactly one arc between i and i* on some side, and it must be
        // linked with i, i.e. not fixed
        bool ok = false;
        for (std::size_t m : {(i + 1) % n, (i + n - 1) % n}) {
          const std::size_t other = (m == (i + 1) % n) ? (i + 2) % n : (i + n - 2) % n;
          if (other == pairing[i] && !fixed(m)) ok = true;
        }
        if (!ok) return i;
      }
    }
    return std::nullopt;
  }

  bool is_normalized() const { return !first_violation().has_value(); }

  /// Greedy block scan starting at arc `offset`.
  std::optional<FactorDecomposition> factorize_from(std::size_t offset) const {
    const std::size_t n = size();
    FactorDecomposition out;
    out.offset = offset;
    std::size_t k = 0;
    auto at = [&](std::size_t rel) { return (offset + rel) % n; };
    auto rel_of = [&](std::size_t abs) { return (abs + n - offset) % n; };
    while (k < n) {
      const std::size_t i = at(k);
      if (fixed(i)) {
        out.blocks.push_back({Block::Kind::Fixed, i});
        k += 1;
      } else if (k + 1 < n && rel_of(pairing[i]) == k + 1) {
        out.blocks.push_back({Block::Kind::Pair, i});
        k += 2;
      } else if (k + 3 < n && rel_of(pairing[i]) == k + 2 &&
                 rel_of(pairing[at(k + 1)]) == k + 3) {
        out.blocks.push_back({Block::Kind::Quad, i});
        k += 4;
      } else {
        return std::nullopt;
      }
    }
    return out;
  }

  FactorDecomposition factorize() const {
    for (std::size_t r = 0; r < size(); ++r) {
      if (auto f = factorize_from(r)) return *std::move(f);
    }
    const auto v = first_violation();
    throw Error(ErrorKind::NotNormalized, "symbol is not normalized", v.value_or(0));
  }
};

class ExtendedFareySymbol {
 public:
  ExtendedFareySymbol() = default;

  /// Unchecked constructor; call validate() when the input is untrusted.
  ExtendedFareySymbol(std::vector<Cusp> vertices, std::vector<std::size_t> pairing,
                      std::vector<int> ell, std::optional<long long> level = std::nullopt)
      : vertices_(std::move(vertices)),
        collier_{std::move(pairing), std::move(ell)},
        level_(level) {}

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Cusp>& vertices() const { return vertices_; }
  const Cusp& vertex(std::size_t i) const { return vertices_[i % size()]; }
  const std::vector<std::size_t>& pairing() const { return collier_.pairing; }
  std::size_t partner(std::size_t i) const { return collier_.pairing[i]; }
  const std::vector<int>& ell() const { return collier_.ell; }
  int ell_order(std::size_t i) const { return collier_.ell[i]; }
  bool is_fixed(std::size_t i) const { return collier_.fixed(i); }
  const Collier& collier() const { return collier_; }
  std::optional<long long> level() const { return level_; }
  void set_level(std::optional<long long> level) { level_ = level; }

  /// Arc i runs from vertex i to vertex i + 1.
  std::pair<const Cusp&, const Cusp&> arc(std::size_t i) const {
    return {vertices_[i], vertices_[(i + 1) % size()]};
  }
  IMat arc_matrix(std::size_t i) const {
    return farey::arc_matrix(vertices_[i], vertices_[(i + 1) % size()]);
  }
  Int width(std::size_t i) const { return arc_matrix(i).det(); }

  /// Gluing matrix of arc i (det 1, integral); throws invalid-symbol if the
  /// data does not produce one.
  IMat gluing(std::size_t i) const {
    const IMat A = arc_matrix(i);
    IMat g;
    switch (collier_.ell[i]) {
      case 2: g = order2_element(A); break;
      case 3: g = order3_element(A); break;
      default: g = mul_by_inverse(A, arc_matrix_minus(arc_matrix(partner(i))));
    }
    if (g.det() != 1) throw Error(ErrorKind::InvalidSymbol, "gluing matrix has det != 1", i);
    return g;
  }

  std::vector<IMat> gluings() const {
    std::vector<IMat> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(gluing(i));
    return out;
  }

  std::size_t distance(std::size_t i, std::size_t j) const { return collier_.distance(i, j); }

  ArcClass classify_arc(std::size_t i) const {
    const std::size_t d = distance(i, partner(i));
    if (d == 0) return collier_.ell[i] == 3 ? ArcClass::Elliptic3 : ArcClass::Elliptic2;
    return d == 1 ? ArcClass::Parabolic : ArcClass::Hyperbolic;
  }

  bool is_linked(std::size_t i, std::size_t j) const { return collier_.is_linked(i, j); }
  bool is_normalized() const { return collier_.is_normalized(); }
  FactorDecomposition factorize() const { return collier_.factorize(); }

  bool is_unimodular() const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (width(i) != 1) return false;
    }
    return true;
  }

  /// Index of the arc (oo, 0), if present.
  std::optional<std::size_t> infinity_zero_arc() const {
    const Cusp inf = Cusp::infinity(), zero(0, 1);
    for (std::size_t i = 0; i < size(); ++i) {
      if (vertices_[i] == inf && vertices_[(i + 1) % size()] == zero) return i;
    }
    return std::nullopt;
  }

  /// Relabels so that old arc k becomes arc 0.
  ExtendedFareySymbol rotated(std::size_t k) const {
    const std::size_t n = size();
    if (n == 0 || k % n == 0) return *this;
    k %= n;
    std::vector<Cusp> v(n);
    std::vector<std::size_t> p(n);
    std::vector<int> e(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t old = (j + k) % n;
      v[j] = vertices_[old];
      p[j] = (collier_.pairing[old] + n - k) % n;
      e[j] = collier_.ell[old];
    }
    return ExtendedFareySymbol(std::move(v), std::move(p), std::move(e), level_);
  }

  /// Full structural validation; throws invalid-symbol naming the first
  /// failed condition. The arc (oo, 0) check can be skipped for
  /// intermediate polygons.
  void validate(bool require_infinity_zero = true) const;

  /// Non-throwing variant of validate().
  bool is_valid(std::string* why = nullptr, bool require_infinity_zero = true) const {
    try {
      validate(require_infinity_zero);
      return true;
    } catch (const Error& e) {
      if (why) *why = e.what();
      return false;
    }
  }

  friend bool operator==(const ExtendedFareySymbol& x, const ExtendedFareySymbol& y) {
    return x.vertices_ == y.vertices_ && x.collier_.pairing == y.collier_.pairing &&
           x.collier_.ell == y.collier_.ell && x.level_ == y.level_;
  }

 private:
  std::vector<Cusp> vertices_;
  Collier collier_;
  std::optional<long long> level_;
};

inline void ExtendedFareySymbol::validate(bool require_infinity_zero) const {
  auto fail = [](const std::string& msg, std::optional<std::size_t> i = std::nullopt) {
    throw Error(ErrorKind::InvalidSymbol, msg, i);
  };
  const std::size_t n = size();
  if (n < 2) fail("need at least two vertices");
  if (collier_.pairing.size() != n || collier_.ell.size() != n) fail("length mismatch");

  std::unordered_set<Cusp, CuspHash> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.insert(vertices_[i]).second) fail("repeated vertex " + vertices_[i].str(), i);
  }
  if (n >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      if (circular_order(vertices_[i], vertices_[(i + 1) % n], vertices_[(i + 2) % n]) != 1) {
        fail("vertices not in circular order", i);
      }
    }
    // exactly one wrap-around in the order oo < reals, so the boundary winds once
    auto before = [](const Cusp& x, const Cusp& y) {
      if (x.is_infinity() || y.is_infinity()) return x.is_infinity() && !y.is_infinity();
      return cross(x, y) < 0;
    };
    std::size_t wraps = 0;
    for (std::size_t i = 0; i < n; ++i) wraps += before(vertices_[(i + 1) % n], vertices_[i]);
    if (wraps != 1) fail("boundary winds more than once");
  }
  if (require_infinity_zero && !infinity_zero_arc()) fail("no arc (oo, 0)");

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = collier_.pairing[i];
    if (j >= n || collier_.pairing[j] != i) fail("pairing is not an involution", i);
    const int e = collier_.ell[i];
    if (j == i && e != 2 && e != 3) fail("fixed arc without elliptic order", i);
    if (j != i && e != 0) fail("elliptic order on a paired arc", i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = collier_.pairing[i];
    if (j != i && width(i) != width(j)) fail("paired arcs differ in width", i);
    try {
      const IMat g = gluing(i);
      if (j != i) {
        // g maps the reversed partner onto arc i
        if (moebius(g, vertices_[(j + 1) % n]) != vertices_[i] ||
            moebius(g, vertices_[j]) != vertices_[(i + 1) % n]) {
          fail("gluing does not carry the partner arc", i);
        }
      }
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::InvalidSymbol) fail(err.what(), i);
      throw;
    }
  }
}

/// True iff every gluing matrix passes the oracle.
inline bool group_contains_check(const ExtendedFareySymbol& f, const MembershipOracle& oracle) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!oracle(f.gluing(i))) return false;
  }
  return true;
}

}  // namespace farey
