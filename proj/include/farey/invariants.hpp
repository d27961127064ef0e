#pragma once

// Data read off an extended Farey symbol: cusp classes and widths, the
// numerical invariants, generators, the Delta_0 presentation and the word
// problem for the symbol's group.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "farey/errors.hpp"
#include "farey/exact.hpp"
#include "farey/symbol.hpp"

namespace farey {

/// One factor of a word: gamma_arc ^ exponent.
struct Letter {
  std::size_t arc;
  int exponent;
  friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

/// Product of the letters, left to right.
inline IMat evaluate_word(const ExtendedFareySymbol& f, const Word& w) {
  std::map<std::size_t, IMat> cache;
  IMat out;
  for (const Letter& l : w) {
    auto it = cache.find(l.arc);
    if (it == cache.end()) it = cache.emplace(l.arc, f.gluing(l.arc)).first;
    out = out * power(it->second, l.exponent);
  }
  return out;
}

/// One arc per generator: (oo, 0) first, then one arc of every other
/// non-elliptic pair (the lower index), then the fixed arcs.
inline std::vector<std::size_t> arc_representatives(const ExtendedFareySymbol& f) {
  const std::size_t n = f.size();
  std::vector<std::size_t> out;
  const auto z = f.infinity_zero_arc();
  if (z && !f.is_fixed(*z)) out.push_back(*z);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = f.partner(i);
    if (j == i || (z && (i == *z || j == *z)) || j < i) continue;
    out.push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (f.is_fixed(i)) out.push_back(i);
  }
  return out;
}

namespace detail {

/// Maps every arc to its generator letter: gamma_i is rep^{+1} or, for the
/// partner of a representative, rep^{-1}.
inline std::vector<Letter> letters_of(const ExtendedFareySymbol& f) {
  std::vector<Letter> out(f.size());
  for (std::size_t r : arc_representatives(f)) {
    out[r] = {r, 1};
    if (!f.is_fixed(r)) out[f.partner(r)] = {r, -1};
  }
  return out;
}

inline Letter inverse(Letter l) { return {l.arc, -l.exponent}; }

}  // namespace detail

// --- cusp classes ----------------------------------------------------------

struct CuspClass {
  Cusp representative;
  std::size_t vertex = 0;             ///< vertex index of the representative
  std::vector<std::size_t> vertices;  ///< the orbit's polygon vertices
  Int width;
  Word stabilizer;  ///< product generates the stabilizer of `representative`
};

/// Orbits of polygon vertices under the successor map s -> gamma_a^-1 s,
/// with a the arc starting at s.
inline std::vector<CuspClass> cusp_orbits(const ExtendedFareySymbol& f) {
  const std::size_t n = f.size();
  const auto letters = detail::letters_of(f);
  std::vector<bool> seen(n, false);
  std::vector<CuspClass> out;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    CuspClass cls;
    cls.representative = f.vertex(start);
    cls.vertex = start;
    IMat prod;
    std::size_t v = start;
    do {
      seen[v] = true;
      cls.vertices.push_back(v);
      prod = inverse_sl2(f.gluing(v)) * prod;
      cls.stabilizer.insert(cls.stabilizer.begin(), detail::inverse(letters[v]));
      v = (f.partner(v) + 1) % n;
    } while (v != start);

    const Cusp& c = cls.representative;
    Int s, t, g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c.num().get_mpz_t(),
               c.den().get_mpz_t());
    const IMat to_inf(c.num(), -t, c.den(), s);  // maps oo to c
    const IMat m = inverse_sl2(to_inf) * prod * to_inf;
    if (sgn(m.c) != 0 || abs(m.a) != 1 || sgn(m.b) == 0) {
      throw Error(ErrorKind::InternalConsistency, "cusp stabilizer is not parabolic at " + c.str());
    }
    cls.width = abs(m.b);
    out.push_back(std::move(cls));
  }
  return out;
}

/// Orbit number of every vertex, numbered as in cusp_orbits().
inline std::vector<std::size_t> vertex_classes(const std::vector<CuspClass>& orbits,
                                               std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    for (std::size_t v : orbits[k].vertices) out[v] = k;
  }
  return out;
}

// --- counts ------------------------------------------------------------------

struct Counts {
  long genus = 0;
  long cusps = 0;
  long nu2 = 0;
  long nu3 = 0;
  long index = 0;  ///< index in PSL2(Z)
  friend bool operator==(const Counts&, const Counts&) = default;
};

inline Counts counts(const ExtendedFareySymbol& f) {
  Counts c;
  long pairs = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.ell_order(i) == 2) ++c.nu2;
    if (f.ell_order(i) == 3) ++c.nu3;
    if (f.partner(i) > i) ++pairs;
  }
  const auto orbits = cusp_orbits(f);
  c.cusps = static_cast<long>(orbits.size());
  Int index = 0;
  for (const auto& o : orbits) index += o.width;
  c.index = index.get_si();
  // Euler characteristic of the glued polygon: 2 - 2g = cusps - pairs + 1
  if ((pairs - c.cusps + 1) % 2 != 0) {
    throw Error(ErrorKind::InternalConsistency, "odd Euler characteristic");
  }
  c.genus = (pairs - c.cusps + 1) / 2;
  if (f.is_unimodular() &&
      c.index != 3 * (static_cast<long>(f.size()) - 2) + c.nu3) {
    throw Error(ErrorKind::InternalConsistency, "cusp widths disagree with the unimodular index");
  }
  if (f.is_normalized() &&
      static_cast<long>(f.factorize().count(Block::Kind::Quad)) != c.genus) {
    throw Error(ErrorKind::InternalConsistency, "quadruple count disagrees with the genus");
  }
  return c;
}

/// On a normalized symbol: the middle vertices of the Pair blocks lie in
/// pairwise distinct classes and every other vertex lies in one common
/// class, distinct from those.
inline bool check_cusp_structure(const ExtendedFareySymbol& f) {
  const auto fd = f.factorize();
  const auto orbits = cusp_orbits(f);
  const auto cls = vertex_classes(orbits, f.size());
  std::vector<bool> middle(f.size(), false);
  std::vector<std::size_t> pair_classes;
  for (const Block& b : fd.blocks) {
    if (b.kind != Block::Kind::Pair) continue;
    const std::size_t m = (b.start + 1) % f.size();
    middle[m] = true;
    pair_classes.push_back(cls[m]);
  }
  std::sort(pair_classes.begin(), pair_classes.end());
  if (std::adjacent_find(pair_classes.begin(), pair_classes.end()) != pair_classes.end()) {
    return false;
  }
  std::optional<std::size_t> common;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (middle[v]) continue;
    if (!common) common = cls[v];
    if (cls[v] != *common) return false;
  }
  if (common && std::binary_search(pair_classes.begin(), pair_classes.end(), *common)) {
    return false;
  }
  return orbits.size() == pair_classes.size() + (common ? 1 : 0);
}

// --- generators ----------------------------------------------------------------

struct Generator {
  IMat matrix;
  ArcClass kind;
  std::size_t arc;
};

struct GeneratorSystem {
  std::vector<Generator> generators;
  /// Positions in `generators` of (gamma_a, gamma_b) for each block a b a* b*
  /// of a normalized symbol; empty otherwise.
  std::vector<std::pair<std::size_t, std::size_t>> symplectic;

  std::size_t count(ArcClass k) const {
    return static_cast<std::size_t>(std::count_if(
        generators.begin(), generators.end(), [k](const Generator& g) { return g.kind == k; }));
  }
};

inline GeneratorSystem generators(const ExtendedFareySymbol& f) {
  GeneratorSystem out;
  std::vector<std::size_t> position(f.size());
  for (std::size_t r : arc_representatives(f)) {
    position[r] = position[f.partner(r)] = out.generators.size();
    out.generators.push_back({f.gluing(r), f.classify_arc(r), r});
  }
  if (f.is_normalized()) {
    for (const Block& b : f.factorize().blocks) {
      if (b.kind != Block::Kind::Quad) continue;
      out.symplectic.emplace_back(position[b.start], position[(b.start + 1) % f.size()]);
    }
  }
  return out;
}

// --- group ring ----------------------------------------------------------------

/// Element of Z[PSL2(Z)]: integer combination of matrices taken up to sign.
class GroupRingElement {
 public:
  GroupRingElement() = default;

  static GroupRingElement one() { return of(IMat()); }
  static GroupRingElement of(const IMat& g, Int coefficient = 1) {
    GroupRingElement x;
    x.add(g, std::move(coefficient));
    return x;
  }

  void add(const IMat& g, Int coefficient) {
    if (sgn(coefficient) == 0) return;
    auto [it, fresh] = terms_.try_emplace(g.psl_normalized(), coefficient);
    if (!fresh) {
      it->second += coefficient;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// (coefficient, element) pairs in a fixed order.
  std::vector<std::pair<Int, IMat>> terms() const {
    std::vector<std::pair<Int, IMat>> out;
    for (const auto& [g, c] : terms_) out.emplace_back(c, g);
    return out;
  }

  friend GroupRingElement operator+(GroupRingElement x, const GroupRingElement& y) {
    for (const auto& [g, c] : y.terms_) x.add(g, c);
    return x;
  }
  friend GroupRingElement operator-(GroupRingElement x, const GroupRingElement& y) {
    for (const auto& [g, c] : y.terms_) x.add(g, -c);
    return x;
  }
  friend GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y) {
    GroupRingElement out;
    for (const auto& [g, c] : x.terms_) {
      for (const auto& [h, d] : y.terms_) out.add(g * h, c * d);
    }
    return out;
  }
  friend bool operator==(const GroupRingElement& x, const GroupRingElement& y) {
    return x.terms_ == y.terms_;
  }

 private:
  struct Less {
    bool operator()(const IMat& x, const IMat& y) const {
      if (int c = cmp(x.a, y.a)) return c < 0;
      if (int c = cmp(x.b, y.b)) return c < 0;
      if (int c = cmp(x.c, y.c)) return c < 0;
      return cmp(x.d, y.d) < 0;
    }
  };
  std::map<IMat, Int, Less> terms_;
};

// --- Delta_0 presentation --------------------------------------------------------

struct Delta0Presentation {
  std::vector<std::size_t> generators;  ///< arc indices; (oo, 0) first
  std::vector<GroupRingElement> lambda;  ///< one per generator
  std::vector<std::pair<std::size_t, GroupRingElement>> mu;  ///< (fixed arc, mu_a)
};

inline GroupRingElement mu_element(const IMat& g, int order) {
  GroupRingElement out;
  IMat p;
  for (int s = 0; s < order; ++s) {
    out.add(p, 1);
    p = p * g;
  }
  return out;
}

inline Delta0Presentation delta0_presentation(const ExtendedFareySymbol& f) {
  Delta0Presentation out;
  out.generators = arc_representatives(f);
  for (std::size_t a : out.generators) {
    const IMat g = f.gluing(a);
    if (f.is_fixed(a)) {
      out.lambda.push_back(GroupRingElement::one());
      out.mu.emplace_back(a, mu_element(g, f.ell_order(a)));
    } else {
      out.lambda.push_back(GroupRingElement::one() - GroupRingElement::of(inverse_sl2(g)));
    }
  }
  return out;
}

/// The three relations of the generating set, checked on cusps:
/// the arcs sum to zero as a divisor, gamma_a carries the reversed partner
/// onto a, and order-3 arcs close up into a triangle.
inline bool check_relations(const ExtendedFareySymbol& f) {
  const std::size_t n = f.size();
  std::map<std::string, long> divisor;
  for (std::size_t i = 0; i < n; ++i) {
    divisor[f.vertex(i + 1).str()] += 1;
    divisor[f.vertex(i).str()] -= 1;
  }
  for (const auto& [k, v] : divisor) {
    if (v != 0) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const IMat g = f.gluing(i);
    const std::size_t j = f.partner(i);
    if (f.ell_order(i) == 3) {
      // a, g a, g^2 a chain: end of each is the start of the next
      const Cusp r = f.vertex(i), s = f.vertex(i + 1);
      const Cusp r1 = moebius(g, r), s1 = moebius(g, s);
      const Cusp r2 = moebius(g, r1), s2 = moebius(g, s1);
      if (!(s1 == r && s2 == r1 && s == r2)) return false;
    } else if (moebius(g, f.vertex(j + 1)) != f.vertex(i) ||
               moebius(g, f.vertex(j)) != f.vertex(i + 1)) {
      return false;
    }
  }
  return true;
}

using RingMatrix = std::vector<std::vector<GroupRingElement>>;

/// Matrix of the map out of stage n of the resolution, acting on row
/// vectors. Stage 1 has rows (v, w_a for fixed a) and one column per
/// generator; later stages are diagonal over the fixed arcs, alternating
/// gamma_a - 1 (even n) and mu_a (odd n).
inline RingMatrix resolution_maps(const ExtendedFareySymbol& f, int stage) {
  if (stage < 1) throw Error(ErrorKind::InvalidStage, "stage must be at least 1");
  const Delta0Presentation p = delta0_presentation(f);
  const std::size_t e = p.mu.size();
  if (stage == 1) {
    RingMatrix m(1 + e, std::vector<GroupRingElement>(p.generators.size()));
    m[0] = p.lambda;
    for (std::size_t k = 0; k < e; ++k) {
      const auto col = static_cast<std::size_t>(
          std::find(p.generators.begin(), p.generators.end(), p.mu[k].first) -
          p.generators.begin());
      m[1 + k][col] = p.mu[k].second;
    }
    return m;
  }
  RingMatrix m(e, std::vector<GroupRingElement>(e));
  for (std::size_t k = 0; k < e; ++k) {
    m[k][k] = stage % 2 == 0
                  ? GroupRingElement::of(f.gluing(p.mu[k].first)) - GroupRingElement::one()
                  : p.mu[k].second;
  }
  return m;
}

// --- word problem ----------------------------------------------------------------

/// Reduces matrices against the tiling by translates of the polygon and of
/// the ideal triangles r s w beyond order-3 sides (each such triangle is
/// surrounded by P, gamma P and gamma^2 P).
///
/// The image h(oo, 0) of the first side is pulled back toward the polygon:
/// when both its ends lie in the boundary interval cut off by side i, the
/// translate lies beyond side i and h becomes gamma_i^-1 h (or gamma_i^-2 h
/// behind the far side of a triangle). Membership holds when the edge
/// returns to (oo, 0) itself.
class WordSolver {
 public:
  explicit WordSolver(const ExtendedFareySymbol& f)
      : n_(f.size()), letters_(detail::letters_of(f)) {
    const auto z = f.infinity_zero_arc();
    if (!z) throw Error(ErrorKind::InvalidSymbol, "no arc (oo, 0)");
    offset_ = *z;
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i = (k + offset_) % n_;
      vertices_.push_back(f.vertex(i));
      const IMat g = f.gluing(i);
      inverse_gluings_.push_back(inverse_sl2(g));
      third_.push_back(f.ell_order(i) == 3 ? std::optional<Cusp>(moebius_sl2(g, f.vertex(i)))
                                           : std::nullopt);
    }
  }

  /// A word whose product is g up to sign, or nullopt when g is not in the
  /// group.
  std::optional<Word> express(const IMat& g) const {
    if (g.det() != 1) throw Error(ErrorKind::InvalidInput, "matrix must have determinant 1");
    const Int bound = (g.size_measure() + 16) * Int(static_cast<unsigned long>(n_ + 4));
    const unsigned long cap = bound.fits_ulong_p() ? bound.get_ui() : ~0UL;
    Word out;
    IMat h = g;
    for (unsigned long step = 0;; ++step) {
      if (step > cap) throw Error(ErrorKind::ReductionStuck, "no convergence for " + g.str());
      const Cusp x = Cusp::from_primitive(h.a, h.c), y = Cusp::from_primitive(h.b, h.d);
      if (x.is_infinity() && sgn(y.num()) == 0) return out;
      const auto side = beyond(x, y);
      if (!side) return std::nullopt;
      int times = 1;
      if (const auto& w = third_[*side]) {
        // gamma maps s -> r -> w: P, gamma P, gamma^2 P lie across
        // (r, s), (w, r), (s, w). With two sides P is a single geodesic and
        // the reversed triangle sides are images of (oo, 0) as well.
        const bool flat = n_ == 2;
        const Cusp& r = vertices_[*side];
        const Cusp& s = vertices_[(*side + 1) % n_];
        if (within(r, *w, x) && within(r, *w, y)) {
          if (!flat && x == r && y == *w) return std::nullopt;
        } else if (within(*w, s, x) && within(*w, s, y)) {
          if (!flat && x == *w && y == s) return std::nullopt;
          times = 2;
        } else {
          return std::nullopt;
        }
      }
      for (int k = 0; k < times; ++k) {
        h = inverse_gluings_[*side] * h;
        out.push_back(letters_[(*side + offset_) % n_]);
      }
    }
  }

  bool contains(const IMat& g) const { return express(g).has_value(); }

 private:
  static bool less(const Cusp& x, const Cusp& y) { return sgn(cross(x, y)) < 0; }

  /// x on the closed counterclockwise boundary arc from p to q.
  static bool within(const Cusp& p, const Cusp& q, const Cusp& x) {
    return x == p || x == q || circular_order(p, x, q) == 1;
  }

  /// Sides (rotated numbering) whose closed boundary interval holds x.
  std::pair<std::size_t, std::size_t> locate(const Cusp& x) const {
    if (x.is_infinity()) return {n_ - 1, 0};
    if (sgn(x.num()) < 0) return {0, 0};
    // vertices_[1..n-1] increase from 0
    std::size_t lo = 1, hi = n_ - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (less(x, vertices_[mid])) hi = mid - 1;
      else lo = mid;
    }
    if (vertices_[lo] == x) return {lo - 1, lo};
    return {lo, lo};
  }

  std::optional<std::size_t> beyond(const Cusp& x, const Cusp& y) const {
    const auto [x0, x1] = locate(x);
    const auto [y0, y1] = locate(y);
    for (std::size_t i : {x0, x1}) {
      if (i != y0 && i != y1) continue;
      if (x == vertices_[i] && y == vertices_[(i + 1) % n_]) continue;  // a side of the polygon
      return i;
    }
    return std::nullopt;
  }

  std::size_t n_;
  std::size_t offset_ = 0;
  std::vector<Cusp> vertices_;
  std::vector<IMat> inverse_gluings_;
  std::vector<std::optional<Cusp>> third_;
  std::vector<Letter> letters_;
};

inline std::optional<Word> express_word(const ExtendedFareySymbol& f, const IMat& g) {
  return WordSolver(f).express(g);
}

}  // namespace farey
