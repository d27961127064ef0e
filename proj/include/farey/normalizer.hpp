#pragma once

// Normalization of extended Farey symbols by cut-and-glue (Siegel dissection).
//
// A normalized prefix W is grown one step at a time until it covers the
// whole symbol. W is kept at the front and is never moved by a group
// element, so the arc (oo, 0), which starts inside W, survives unchanged.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "farey/errors.hpp"
#include "farey/exact.hpp"
#include "farey/oracle.hpp"
#include "farey/symbol.hpp"

namespace farey {

/// Which side of a non-elliptic cut is moved: the block holding the pivot
/// (by gamma^-1) or the block holding its partner (by gamma).
enum class CutSide { PivotBlock, OtherBlock };

/// For an elliptic cut at vertex c: move the arcs from c up to the pivot
/// (Before, by gamma^-1) or the arcs after the pivot back to c (After, by
/// gamma).
enum class EllipticSide { Before, After };

/// Operation sequence for the hyperbolic step. Both leave W in place;
/// Adjacent moves the tail of the symbol, AdjacentAlt the part between W and
/// the pivots.
enum class HyperbolicStrategy { Adjacent, AdjacentAlt };

struct OpResult {
  ExtendedFareySymbol symbol;
  /// Old arc index -> new arc index. The pivot maps to the new cut arc and
  /// its partner to the new cut arc's partner.
  std::vector<std::size_t> index_map;
};

namespace detail {

inline void check_op_result(const ExtendedFareySymbol& f, bool require_infinity_zero = false) {
  std::string why;
  if (!f.is_valid(&why, require_infinity_zero)) throw Error(ErrorKind::InternalConsistency, "cut produced " + why);
}

struct ArcSource {
  Cusp start;
  std::size_t origin;  // old arc index, or one of the markers below
};
constexpr std::size_t kCutArc = SIZE_MAX;
constexpr std::size_t kCutPartner = SIZE_MAX - 1;

inline OpResult assemble(const ExtendedFareySymbol& f, std::vector<ArcSource> arcs,
                         std::size_t pivot) {
  const std::size_t n = arcs.size();
  const std::size_t partner = f.partner(pivot);
  std::vector<std::size_t> map(n);
  std::size_t cut = 0, cut_partner = 0;
  for (std::size_t j = 0; j < n; ++j) {
    switch (arcs[j].origin) {
      case kCutArc: map[pivot] = cut = j; break;
      case kCutPartner: map[partner] = cut_partner = j; break;
      default: map[arcs[j].origin] = j;
    }
  }
  std::vector<Cusp> v;
  std::vector<std::size_t> p(n);
  std::vector<int> e(n, 0);
  v.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t o = arcs[j].origin;
    v.push_back(std::move(arcs[j].start));
    if (o == kCutArc) {
      p[j] = f.is_fixed(pivot) ? cut : cut_partner;
      e[j] = f.ell_order(pivot);
    } else if (o == kCutPartner) {
      p[j] = cut;
      e[j] = f.ell_order(pivot);
    } else {
      p[j] = map[f.partner(o)];
      e[j] = f.ell_order(o);
    }
  }
  return {ExtendedFareySymbol(std::move(v), std::move(p), std::move(e), f.level()), std::move(map)};
}

}  // namespace detail

/// Cuts along the chord between vertices cut1 and cut2, which must separate
/// the pivot from its partner, and glues the two pieces back along the
/// partner arc. With X1 a X2 | X3 a* X4 read from the cut vertex that
/// starts the pivot's block, the result is a' X3 X2' a'* X1' X4 where the
/// primed blocks are moved by gamma_a^-1 (PivotBlock), or the same word with
/// X3, X4 and a' moved by gamma_a instead (OtherBlock).
inline OpResult base_cut_nonelliptic(const ExtendedFareySymbol& f, std::size_t pivot,
                                     std::size_t cut1, std::size_t cut2, CutSide side,
                                     bool validate = true) {
  const std::size_t n = f.size();
  if (pivot >= n || cut1 >= n || cut2 >= n) throw Error(ErrorKind::InvalidCut, "index out of range");
  if (f.is_fixed(pivot)) throw Error(ErrorKind::InvalidCut, "pivot is elliptic", pivot);
  if (cut1 == cut2) throw Error(ErrorKind::InvalidCut, "cut vertices coincide");
  auto rel = [n](std::size_t x, std::size_t base) { return (x + n - base) % n; };
  std::size_t c1 = cut1, c2 = cut2;
  if (rel(pivot, c1) >= rel(c2, c1)) std::swap(c1, c2);
  const std::size_t q = f.partner(pivot);
  const std::size_t P = rel(pivot, c1), M = rel(c2, c1), Q = rel(q, c1);
  if (Q < M) throw Error(ErrorKind::InvalidCut, "cut does not separate the pivot from its partner", pivot);

  const IMat gamma = f.gluing(pivot);
  const bool move_pivot = side == CutSide::PivotBlock;
  const IMat move = move_pivot ? inverse_sl2(gamma) : gamma;
  // `pivot_side` selects the pivot's block (X1, X2, a'*) vs the other one.
  auto image = [&](bool pivot_side, std::size_t k) {
    const Cusp& x = f.vertex((k + c1) % n);
    return pivot_side == move_pivot ? moebius_sl2(move, x) : x;
  };
  std::vector<detail::ArcSource> arcs;
  arcs.reserve(n);
  auto abs_index = [&](std::size_t k) { return (k + c1) % n; };
  arcs.push_back({image(false, 0), detail::kCutArc});
  for (std::size_t k = M; k < Q; ++k) arcs.push_back({image(false, k), abs_index(k)});
  for (std::size_t k = P + 1; k < M; ++k) arcs.push_back({image(true, k), abs_index(k)});
  arcs.push_back({image(true, M), detail::kCutPartner});
  for (std::size_t k = 0; k < P; ++k) arcs.push_back({image(true, k), abs_index(k)});
  for (std::size_t k = Q + 1; k < n; ++k) arcs.push_back({image(false, k), abs_index(k)});

  OpResult out = detail::assemble(f, std::move(arcs), pivot);
  if (validate) detail::check_op_result(out.symbol);
  return out;
}

/// Moves an elliptic arc next to the cut vertex. Reading X1 a X2 from the
/// cut, the result is a' X1' X2 (Before) or X1 X2' a' (After), where the
/// moved block goes by the pivot's gluing matrix in the direction that keeps
/// the polygon closed.
inline OpResult base_cut_elliptic(const ExtendedFareySymbol& f, std::size_t pivot,
                                  std::size_t cut, EllipticSide side, bool validate = true) {
  const std::size_t n = f.size();
  if (pivot >= n || cut >= n) throw Error(ErrorKind::InvalidCut, "index out of range");
  if (!f.is_fixed(pivot)) throw Error(ErrorKind::InvalidCut, "pivot is not elliptic", pivot);
  const std::size_t P = (pivot + n - cut) % n;
  const Cusp& r = f.vertex(pivot);
  const Cusp& s = f.vertex(pivot + 1);
  IMat gamma = f.gluing(pivot);
  if (moebius_sl2(gamma, s) != r) gamma = inverse_sl2(gamma);
  if (moebius_sl2(gamma, s) != r) {
    throw Error(ErrorKind::InternalConsistency, "elliptic gluing does not reverse its arc", pivot);
  }
  const IMat back = inverse_sl2(gamma);
  auto vert = [&](std::size_t k) -> const Cusp& { return f.vertex((k + cut) % n); };
  auto abs_index = [&](std::size_t k) { return (k + cut) % n; };
  std::vector<detail::ArcSource> arcs;
  arcs.reserve(n);
  if (side == EllipticSide::Before) {
    arcs.push_back({vert(0), detail::kCutArc});
    for (std::size_t k = 0; k < P; ++k) arcs.push_back({moebius_sl2(back, vert(k)), abs_index(k)});
    for (std::size_t k = P + 1; k < n; ++k) arcs.push_back({vert(k), abs_index(k)});
  } else {
    for (std::size_t k = 0; k < P; ++k) arcs.push_back({vert(k), abs_index(k)});
    for (std::size_t k = P + 1; k < n; ++k) arcs.push_back({moebius_sl2(gamma, vert(k)), abs_index(k)});
    arcs.push_back({moebius_sl2(gamma, vert(0)), detail::kCutArc});
  }
  OpResult out = detail::assemble(f, std::move(arcs), pivot);
  if (validate) detail::check_op_result(out.symbol);
  return out;
}

enum class StepKind { Initial, Extend, Elliptic, Parabolic, Hyperbolic };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Initial: return "initial";
    case StepKind::Extend: return "extend";
    case StepKind::Elliptic: return "elliptic";
    case StepKind::Parabolic: return "parabolic";
    case StepKind::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

struct StepInfo {
  StepKind kind = StepKind::Extend;
  std::vector<std::size_t> pivots;  ///< arc indices before the step
  std::size_t w_before = 0;
  std::size_t w_after = 0;
  std::size_t cuts = 0;
};

/// First: the first applicable arcs after W. Cheapest: the applicable
/// arcs whose step moves the fewest vertices.
enum class PivotRule { First, Cheapest };

struct NormalizeOptions {
  PivotRule pivots = PivotRule::Cheapest;
  HyperbolicStrategy strategy = HyperbolicStrategy::Adjacent;
  /// Validate after every n-th cut (1 = every cut, 0 = never). The result of
  /// normalize() is always validated.
  std::size_t validate_every = 0;
  /// Also require every gluing matrix of validated intermediates to pass
  /// this oracle.
  const MembershipOracle* oracle = nullptr;
  std::function<void(const StepInfo&)> on_step;
  std::function<void(const ExtendedFareySymbol&)> on_intermediate;

  /// Defaults, with validate_every = 1 when FAREY_DEBUG_VALIDATE=1.
  static NormalizeOptions from_env() {
    NormalizeOptions o;
    const char* v = std::getenv("FAREY_DEBUG_VALIDATE");
    if (v && std::string(v) == "1") o.validate_every = 1;
    return o;
  }
};

struct NormalizationState {
  ExtendedFareySymbol symbol;
  std::size_t w_len = 0;
  std::size_t cuts = 0;
};

namespace detail {

/// Length of the normalized block starting at arc i and ending before
/// `limit`, or 0.
inline std::size_t block_at(const ExtendedFareySymbol& f, std::size_t i, std::size_t limit) {
  if (i >= limit) return 0;
  if (f.is_fixed(i)) return 1;
  if (i + 1 < limit && f.partner(i) == i + 1) return 2;
  if (i + 3 < limit && f.partner(i) == i + 2 && f.partner(i + 1) == i + 3) return 4;
  return 0;
}

/// Length of the normalized block ending at the last arc and starting at or
/// after `from`, or 0.
inline std::size_t block_at_end(const ExtendedFareySymbol& f, std::size_t from) {
  const std::size_t n = f.size();
  for (std::size_t len : {1, 2, 4}) {
    if (n >= from + len && block_at(f, n - len, n) == len) return len;
  }
  return 0;
}

inline bool prefix_is_normalized(const ExtendedFareySymbol& f, std::size_t w) {
  std::size_t i = 0;
  while (i < w) {
    const std::size_t len = block_at(f, i, w);
    if (len == 0) return false;
    i += len;
  }
  return true;
}

inline std::size_t find_vertex(const ExtendedFareySymbol& f, const Cusp& c) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.vertex(i) == c) return i;
  }
  throw Error(ErrorKind::InternalConsistency, "lost the anchor vertex " + c.str());
}

class Stepper {
 public:
  Stepper(NormalizationState& st, const NormalizeOptions& opt) : st_(st), opt_(opt) {}

  StepInfo step() {
    StepInfo info;
    info.w_before = st_.w_len;
    const std::size_t cuts_before = st_.cuts;
    if (st_.w_len == 0) {
      initial(info);
    } else if (!extend(info) && !elliptic(info) && !parabolic(info)) {
      hyperbolic(info);
    }
    info.w_after = st_.w_len;
    info.cuts = st_.cuts - cuts_before;
    if (info.w_after <= info.w_before) {
      throw Error(ErrorKind::InternalProgress, "Siegel step did not extend the normalized prefix");
    }
    if (!prefix_is_normalized(st_.symbol, st_.w_len)) {
      throw Error(ErrorKind::InternalConsistency, "normalized prefix broken after a step");
    }
    if (opt_.on_step) opt_.on_step(info);
    return info;
  }

 private:
  ExtendedFareySymbol& f() { return st_.symbol; }
  std::size_t n() const { return st_.symbol.size(); }

  void after_cut(OpResult& r, std::vector<std::size_t*> tracked) {
    for (std::size_t* t : tracked) *t = r.index_map[*t];
    st_.symbol = std::move(r.symbol);
    ++st_.cuts;
    if (opt_.validate_every && st_.cuts % opt_.validate_every == 0) {
      check_op_result(st_.symbol, true);
      if (opt_.oracle && !group_contains_check(st_.symbol, *opt_.oracle)) {
        throw Error(ErrorKind::InternalConsistency, "cut left the group");
      }
    }
    if (opt_.on_intermediate) opt_.on_intermediate(st_.symbol);
  }

  bool validating() const { return opt_.validate_every == 1; }

  /// Rotates so that arc `start` becomes arc 0 and sets the prefix length.
  void settle(std::size_t start, std::size_t w) {
    st_.symbol = st_.symbol.rotated(start % n());
    st_.w_len = w;
  }

  void initial(StepInfo& info) {
    info.kind = StepKind::Initial;
    const auto z = f().infinity_zero_arc();
    if (!z) throw Error(ErrorKind::InvalidSymbol, "no arc (oo, 0)");
    for (std::size_t back = 0; back < 4; ++back) {
      const std::size_t start = (*z + n() - back) % n();
      const ExtendedFareySymbol r = f().rotated(start);
      const std::size_t len = block_at(r, 0, n());
      if (len > back) {
        st_.symbol = r;
        st_.w_len = len;
        return;
      }
    }
    throw Error(ErrorKind::Unsupported,
                "the arc (oo, 0) must start out in a normalized block (fixed, next to its "
                "partner, or in a linked quadruple)");
  }

  bool extend(StepInfo& info) {
    info.kind = StepKind::Extend;
    if (const std::size_t len = block_at(f(), st_.w_len, n())) {
      st_.w_len += len;
      return true;
    }
    if (const std::size_t len = block_at_end(f(), st_.w_len)) {
      settle(n() - len, st_.w_len + len);
      return true;
    }
    return false;
  }

  bool elliptic(StepInfo& info) {
    const std::size_t w = st_.w_len;
    std::optional<std::size_t> e;
    std::size_t best = SIZE_MAX;
    for (std::size_t i = w; i < n() && !(e && opt_.pivots == PivotRule::First); ++i) {
      if (!f().is_fixed(i)) continue;
      const std::size_t c = std::min(n() - i - 1, i - w);
      if (c < best) best = c, e = i;
    }
    if (!e) return false;
    info.kind = StepKind::Elliptic;
    info.pivots = {*e};
    const Cusp anchor = f().vertex(0);
    const std::size_t cost_after = n() - *e - 1, cost_before = *e - w;
    const bool before = cost_before < cost_after;
    if (!before) {
      OpResult r = base_cut_elliptic(f(), *e, 0, EllipticSide::After, validating());
      after_cut(r, {});
      settle(find_vertex(f(), anchor) + n() - 1, w + 1);
    } else {
      OpResult r = base_cut_elliptic(f(), *e, w, EllipticSide::Before, validating());
      after_cut(r, {});
      settle(find_vertex(f(), anchor), w + 1);
    }
    return true;
  }

  bool parabolic(StepInfo& info) {
    const std::size_t w = st_.w_len;
    std::optional<std::size_t> a;
    std::size_t best = SIZE_MAX;
    for (std::size_t i = w; i + 1 < n() && !(a && opt_.pivots == PivotRule::First); ++i) {
      if (f().partner(i) != i + 1) continue;
      const std::size_t c = std::min(n() - i - 2, i - w);
      if (c < best) best = c, a = i;
    }
    if (!a) return false;
    info.kind = StepKind::Parabolic;
    info.pivots = {*a, *a + 1};
    const Cusp anchor = f().vertex(0);
    const std::size_t cost_tail = n() - (*a + 2), cost_mid = *a - w;
    const bool mid = cost_mid < cost_tail;
    std::size_t pivot = *a;
    if (!mid) {
      OpResult r =
          base_cut_nonelliptic(f(), pivot, 0, *a + 1, CutSide::OtherBlock, validating());
      after_cut(r, {&pivot});
      settle(find_vertex(f(), anchor) + n() - 2, w + 2);
    } else {
      OpResult r =
          base_cut_nonelliptic(f(), pivot, w, *a + 1, CutSide::PivotBlock, validating());
      after_cut(r, {&pivot});
      settle(find_vertex(f(), anchor), w + 2);
    }
    return true;
  }

  void hyperbolic(StepInfo& info) {
    const std::size_t w = st_.w_len;
    std::optional<std::size_t> first;
    for (std::size_t i = w; i < n() && !first; ++i) {
      const std::size_t j = f().partner(i);
      if (j >= w && j < i) first = i;
    }
    if (!first) throw Error(ErrorKind::InternalProgress, "no Siegel step applies");
    auto cost_of = [&](std::size_t a, std::size_t as, std::size_t bs) {
      const std::size_t X = a - w, Y = as - a - 2, Z = bs - as - 1, T = n() - bs - 1;
      return opt_.strategy == HyperbolicStrategy::AdjacentAlt ? 2 * X + 3 * Y + 2 * Z
                                                              : 2 * (Z + T) + Y;
    };
    if (opt_.pivots == PivotRule::Cheapest) {
      std::size_t best = cost_of(f().partner(*first), *first, f().partner(f().partner(*first) + 1));
      for (std::size_t a = w; a + 1 < n(); ++a) {
        const std::size_t as = f().partner(a), bs = f().partner(a + 1);
        if (as == a || bs == a + 1 || as <= a + 1 || bs <= as) continue;
        const std::size_t c = cost_of(a, as, bs);
        if (c < best) best = c, first = as;
      }
    }
    info.kind = StepKind::Hyperbolic;
    // W X a b Y a* Z b* T
    const std::size_t a0 = f().partner(*first);
    info.pivots = {a0, a0 + 1};
    if (f().is_fixed(a0 + 1) || !f().is_linked(a0, a0 + 1)) {
      throw Error(ErrorKind::InternalConsistency, "hyperbolic pivots are not linked");
    }
    const Cusp anchor = f().vertex(0);
    const bool alt = opt_.strategy == HyperbolicStrategy::AdjacentAlt;
    std::size_t a = a0, b = a0 + 1, as = *first, bs = f().partner(b);
    std::vector<std::size_t*> all{&a, &b, &as, &bs};
    {
      OpResult r = alt ? base_cut_nonelliptic(f(), b, w, as, CutSide::PivotBlock, validating())
                       : base_cut_nonelliptic(f(), b, 0, as, CutSide::OtherBlock, validating());
      after_cut(r, all);
    }
    {  // b a* Z Y b* W X a T  ->  a* b* W X Z Y a b T
      OpResult r = base_cut_nonelliptic(f(), as, b, bs, CutSide::PivotBlock, validating());
      after_cut(r, all);
    }
    {  // -> b* W X Z Y a b a* T
      OpResult r = base_cut_nonelliptic(f(), bs, as, (bs + 1) % n(), CutSide::PivotBlock,
                                        validating());
      after_cut(r, all);
    }
    {  // -> a b a* b* W X Z Y T
      OpResult r = base_cut_nonelliptic(f(), a, bs, as,
                                        alt ? CutSide::PivotBlock : CutSide::OtherBlock,
                                        validating());
      after_cut(r, all);
    }
    const std::size_t at = find_vertex(f(), anchor);
    settle(alt ? at : at + n() - 4, w + 4);
  }

  NormalizationState& st_;
  const NormalizeOptions& opt_;
};

}  // namespace detail

/// One Siegel step: extends the normalized prefix by 1, 2 or 4 arcs.
inline StepInfo siegel_step(NormalizationState& state, const NormalizeOptions& opt = {}) {
  if (state.w_len >= state.symbol.size()) {
    throw Error(ErrorKind::InvalidInput, "symbol is already fully normalized");
  }
  return detail::Stepper(state, opt).step();
}

inline ExtendedFareySymbol normalize(const ExtendedFareySymbol& f,
                                     const NormalizeOptions& opt = NormalizeOptions::from_env()) {
  f.validate();
  NormalizationState st{f, 0, 0};
  detail::Stepper stepper(st, opt);
  while (st.w_len < st.symbol.size()) stepper.step();
  std::string why;
  if (!st.symbol.is_valid(&why)) throw Error(ErrorKind::InternalConsistency, "normalize produced " + why);
  if (!st.symbol.is_normalized()) {
    throw Error(ErrorKind::InternalConsistency, "normalize output fails the normalized predicate");
  }
  return st.symbol.rotated(*st.symbol.infinity_zero_arc());
}

}  // namespace farey
