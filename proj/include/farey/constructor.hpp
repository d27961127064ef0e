#pragma once

// Unimodular Farey symbols from a membership oracle.
//
// Start from the triangle (oo, 0, 1). Every unpaired side is tested for an
// order-2 self pairing, an order-3 self pairing, and a pairing with another
// unpaired side; if nothing fits, an unpaired side is split at its exterior
// Farey neighbour and everything unpaired is tested again. The side split is
// the one whose new vertex has the smallest denominator (lowest index on
// ties), so Gamma0(N) symbols come out as pieces of Farey sequences.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "farey/errors.hpp"
#include "farey/exact.hpp"
#include "farey/oracle.hpp"
#include "farey/symbol.hpp"

namespace farey {

struct BuildEvent {
  enum class Kind { Subdivide, Order2, Order3, Pair };
  Kind kind;
  Cusp r, s;    ///< the arc acted on (for Pair, the lower-index arc)
  Cusp m;       ///< Subdivide: inserted vertex
  Cusp r2, s2;  ///< Pair: the partner arc
};

struct BuildTrace {
  std::vector<Cusp> initial;
  std::vector<BuildEvent> events;

  /// Rebuilds the symbol from the initial vertices and the event list.
  ExtendedFareySymbol replay(std::optional<long long> level = std::nullopt) const;
};

namespace detail {

inline std::size_t iteration_cap(const MembershipOracle& oracle) {
  return oracle.index_bound ? 10 * *oracle.index_bound + 10 : 1000000;
}

/// Exterior Farey neighbour of a unimodular arc: second column minus first.
inline Cusp farey_split(const Cusp& r, const Cusp& s) {
  const IMat A = arc_matrix(r, s);
  return Cusp::from_primitive(A.b - A.a, A.d - A.c);
}

/// Returns the self-pairing order (2 or 3) of arc (r, s), or 0.
inline int self_pairing(const IMat& A, const MembershipOracle& oracle) {
  if (oracle(order2_element(A))) return 2;
  if (oracle(order3_element(A))) return 3;
  return 0;
}

inline bool pairs_with(const IMat& A, const IMat& B, const MembershipOracle& oracle) {
  const IMat g = mul_by_inverse(A, arc_matrix_minus(B));
  return !is_pm_identity(g) && oracle(g);
}

inline std::optional<ExtendedFareySymbol> build_from_rotation(const MembershipOracle& oracle,
                                                              BuildTrace* trace) {
  const IMat u = tau3();
  if (!oracle(u)) return std::nullopt;
  std::vector<Cusp> v{Cusp::infinity(), Cusp(0, 1)};
  const int e0 = self_pairing(arc_matrix(v[0], v[1]), oracle);
  if (e0 == 0) {
    throw Error(ErrorKind::Unsupported,
                "group contains the order-3 rotation of (oo, 0, 1) but the arc (oo, 0) "
                "admits no self pairing");
  }
  if (trace) {
    trace->initial = v;
    trace->events.push_back({e0 == 2 ? BuildEvent::Kind::Order2 : BuildEvent::Kind::Order3,
                             v[0], v[1], {}, {}, {}});
    trace->events.push_back({BuildEvent::Kind::Order3, v[1], v[0], {}, {}, {}});
  }
  return ExtendedFareySymbol(std::move(v), {0, 1}, {e0, 3}, oracle.level);
}

}  // namespace detail

/// Literal rescan procedure: after every split, all unpaired arcs are tested
/// again in index order. Quadratic per split; kept as the reference the
/// fast builder is checked against.
inline ExtendedFareySymbol build_unimodular_reference(const MembershipOracle& oracle,
                                                      BuildTrace* trace = nullptr) {
  if (auto s = detail::build_from_rotation(oracle, trace)) return *std::move(s);
  std::vector<Cusp> v{Cusp::infinity(), Cusp(0, 1), Cusp(1, 1)};
  if (trace) trace->initial = v;
  std::vector<std::optional<std::size_t>> partner(3);
  std::vector<int> ell(3, 0);
  const std::size_t cap = detail::iteration_cap(oracle);
  std::size_t splits = 0;
  for (;;) {
    const std::size_t n = v.size();
    auto A = [&](std::size_t i) { return arc_matrix(v[i], v[(i + 1) % n]); };
    for (std::size_t i = 0; i < n; ++i) {
      if (partner[i]) continue;
      const IMat Ai = A(i);
      if (int e = detail::self_pairing(Ai, oracle)) {
        partner[i] = i;
        ell[i] = e;
        if (trace) {
          trace->events.push_back({e == 2 ? BuildEvent::Kind::Order2 : BuildEvent::Kind::Order3,
                                   v[i], v[(i + 1) % n], {}, {}, {}});
        }
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || partner[j]) continue;
        if (detail::pairs_with(Ai, A(j), oracle)) {
          partner[i] = j;
          partner[j] = i;
          if (trace) {
            trace->events.push_back({BuildEvent::Kind::Pair, v[i], v[(i + 1) % n], {},
                                     v[j], v[(j + 1) % n]});
          }
          break;
        }
      }
    }
    std::optional<std::size_t> open;
    Cusp best;
    for (std::size_t i = 0; i < n; ++i) {
      if (partner[i]) continue;
      const Cusp m = detail::farey_split(v[i], v[(i + 1) % n]);
      if (!open || m.den() < best.den()) {
        open = i;
        best = m;
      }
    }
    if (!open) break;
    const std::size_t i = *open;
    if (i == 0) throw Error(ErrorKind::Unsupported, "construction would split the arc (oo, 0)");
    if (++splits > cap) throw Error(ErrorKind::LikelyInfiniteIndex, "split cap exceeded");
    if (trace) {
      trace->events.push_back({BuildEvent::Kind::Subdivide, v[i], v[(i + 1) % n], best, {}, {}});
    }
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(i + 1), best);
    for (auto& p : partner) {
      if (p && *p > i) ++*p;
    }
    partner.insert(partner.begin() + static_cast<std::ptrdiff_t>(i + 1), std::nullopt);
    ell.insert(ell.begin() + static_cast<std::ptrdiff_t>(i + 1), 0);
  }
  std::vector<std::size_t> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = *partner[i];
  return ExtendedFareySymbol(std::move(v), std::move(p), std::move(ell), oracle.level);
}

/// Same output as build_unimodular_reference(), without rescanning. Only the
/// two halves of a split arc can acquire partners, so each split costs a
/// few ordered-set operations; partners are found by coset key when the
/// oracle provides one.
inline ExtendedFareySymbol build_unimodular(const MembershipOracle& oracle,
                                            BuildTrace* trace = nullptr) {
  if (auto s = detail::build_from_rotation(oracle, trace)) return *std::move(s);

  struct Node {
    Cusp r, s;
    IMat A;
    Int split_den;
    std::size_t left = SIZE_MAX, right = SIZE_MAX;  // children after a split
    std::size_t partner = SIZE_MAX;
    int ell = 0;
    std::uint64_t key = 0;      // coset key of A
    std::uint64_t rev_key = 0;  // coset key of A^-
    bool paired() const { return partner != SIZE_MAX; }
  };
  std::vector<Node> nodes;
  const bool keyed = static_cast<bool>(oracle.coset_key);
  auto make = [&](const Cusp& r, const Cusp& s) {
    Node nd;
    nd.r = r;
    nd.s = s;
    nd.A = arc_matrix(r, s);
    nd.split_den = Int(nd.A.d - nd.A.c);
    if (sgn(nd.split_den) < 0) nd.split_den = -nd.split_den;
    if (keyed) {
      nd.key = oracle.coset_key(nd.A);
      nd.rev_key = oracle.coset_key(arc_matrix_minus(nd.A));
    }
    nodes.push_back(std::move(nd));
    return nodes.size() - 1;
  };

  // Arcs never reach back to oo, so polygon order is the order of the
  // starting vertex on the real line, with oo first.
  auto before = [&](std::size_t x, std::size_t y) {
    const Cusp& p = nodes[x].r;
    const Cusp& q = nodes[y].r;
    if (q.is_infinity()) return false;
    if (p.is_infinity()) return true;
    return p.num() * q.den() < q.num() * p.den();
  };
  struct ByPos {
    decltype(before)* f;
    bool operator()(std::size_t x, std::size_t y) const { return (*f)(x, y); }
  };
  struct BySplit {
    std::vector<Node>* nodes;
    decltype(before)* f;
    bool operator()(std::size_t x, std::size_t y) const {
      const int c = cmp((*nodes)[x].split_den, (*nodes)[y].split_den);
      return c != 0 ? c < 0 : (*f)(x, y);
    }
  };
  using PosSet = std::set<std::size_t, ByPos>;
  PosSet pending{ByPos{&before}};
  std::set<std::size_t, BySplit> queue{BySplit{&nodes, &before}};
  std::unordered_map<std::uint64_t, PosSet> by_rev_key;

  auto add_pending = [&](std::size_t x) {
    pending.insert(x);
    queue.insert(x);
    if (keyed) by_rev_key.try_emplace(nodes[x].rev_key, ByPos{&before}).first->second.insert(x);
  };
  auto drop_pending = [&](std::size_t x) {
    pending.erase(x);
    queue.erase(x);
    if (keyed) {
      auto it = by_rev_key.find(nodes[x].rev_key);
      it->second.erase(x);
      if (it->second.empty()) by_rev_key.erase(it);
    }
  };
  auto record_self = [&](std::size_t x, int e) {
    nodes[x].partner = x;
    nodes[x].ell = e;
    if (trace) {
      trace->events.push_back({e == 2 ? BuildEvent::Kind::Order2 : BuildEvent::Kind::Order3,
                               nodes[x].r, nodes[x].s, {}, {}, {}});
    }
  };
  auto record_pair = [&](std::size_t x, std::size_t y) {
    nodes[x].partner = y;
    nodes[y].partner = x;
    if (trace) {
      const bool xy = before(x, y);
      const Node& lo = nodes[xy ? x : y];
      const Node& hi = nodes[xy ? y : x];
      trace->events.push_back({BuildEvent::Kind::Pair, lo.r, lo.s, {}, hi.r, hi.s});
    }
  };
  auto matches = [&](std::size_t x, std::size_t e) {
    if (keyed && nodes[x].key != nodes[e].rev_key) return false;
    return detail::pairs_with(nodes[x].A, nodes[e].A, oracle);
  };
  // Pending arcs (in polygon order) that pair with the new arc x.
  auto pending_matches = [&](std::size_t x) {
    std::vector<std::size_t> out;
    if (keyed) {
      auto it = by_rev_key.find(nodes[x].key);
      if (it == by_rev_key.end()) return out;
      for (std::size_t e : it->second) {
        if (matches(x, e)) out.push_back(e);
      }
      return out;
    }
    for (std::size_t e : pending) {
      if (matches(x, e)) out.push_back(e);
    }
    return out;
  };

  // Replays one rescan of the polygon in which only the fresh arcs (in
  // polygon order) can gain partners.
  auto rescan = [&](const std::vector<std::size_t>& fresh) {
    std::vector<std::vector<std::size_t>> cands;
    for (std::size_t x : fresh) cands.push_back(pending_matches(x));
    // Pending arcs before a fresh arc scan it first, in polygon order.
    std::set<std::size_t, ByPos> early{ByPos{&before}};
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      for (std::size_t e : cands[k]) {
        if (before(e, fresh.front())) early.insert(e);
      }
    }
    for (std::size_t e : early) {
      for (std::size_t k = 0; k < fresh.size(); ++k) {
        const std::size_t x = fresh[k];
        if (nodes[x].paired() || nodes[e].paired()) continue;
        if (std::find(cands[k].begin(), cands[k].end(), e) != cands[k].end()) {
          record_pair(e, x);
          drop_pending(e);
        }
      }
    }
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      const std::size_t x = fresh[k];
      if (nodes[x].paired()) continue;
      if (int e = detail::self_pairing(nodes[x].A, oracle)) {
        record_self(x, e);
        continue;
      }
      bool done = false;
      for (std::size_t l = k + 1; l < fresh.size() && !done; ++l) {
        const std::size_t y = fresh[l];
        if (!nodes[y].paired() && detail::pairs_with(nodes[x].A, nodes[y].A, oracle)) {
          record_pair(x, y);
          done = true;
        }
      }
      for (std::size_t e : cands[k]) {
        if (done) break;
        if (!nodes[e].paired() && !before(e, fresh.front())) {
          record_pair(x, e);
          drop_pending(e);
          done = true;
        }
      }
    }
    for (std::size_t x : fresh) {
      if (!nodes[x].paired()) add_pending(x);
    }
  };

  const Cusp inf = Cusp::infinity(), zero(0, 1), one(1, 1);
  if (trace) trace->initial = {inf, zero, one};
  const std::vector<std::size_t> roots{make(inf, zero), make(zero, one), make(one, inf)};
  rescan(roots);

  const std::size_t cap = detail::iteration_cap(oracle);
  std::size_t splits = 0;
  while (!queue.empty()) {
    const std::size_t a = *queue.begin();
    if (a == roots[0]) throw Error(ErrorKind::Unsupported, "construction would split the arc (oo, 0)");
    if (++splits > cap) throw Error(ErrorKind::LikelyInfiniteIndex, "split cap exceeded");
    drop_pending(a);
    const Cusp r = nodes[a].r, s = nodes[a].s;
    const Cusp m = detail::farey_split(r, s);
    if (trace) trace->events.push_back({BuildEvent::Kind::Subdivide, r, s, m, {}, {}});
    const std::size_t x1 = make(r, m);
    const std::size_t x2 = make(m, s);
    nodes[a].left = x1;
    nodes[a].right = x2;
    rescan({x1, x2});
  }

  // In-order traversal of the split tree gives the arcs in polygon order.
  std::vector<std::size_t> order;
  std::vector<std::size_t> todo(roots.rbegin(), roots.rend());
  while (!todo.empty()) {
    const std::size_t x = todo.back();
    todo.pop_back();
    if (nodes[x].left == SIZE_MAX) {
      order.push_back(x);
    } else {
      todo.push_back(nodes[x].right);
      todo.push_back(nodes[x].left);
    }
  }
  std::vector<std::size_t> index_of(nodes.size(), SIZE_MAX);
  for (std::size_t i = 0; i < order.size(); ++i) index_of[order[i]] = i;
  std::vector<Cusp> v;
  std::vector<std::size_t> p;
  std::vector<int> e;
  v.reserve(order.size());
  for (std::size_t x : order) {
    v.push_back(nodes[x].r);
    p.push_back(index_of[nodes[x].partner]);
    e.push_back(nodes[x].ell);
  }
  return ExtendedFareySymbol(std::move(v), std::move(p), std::move(e), oracle.level);
}

inline ExtendedFareySymbol BuildTrace::replay(std::optional<long long> level) const {
  std::vector<Cusp> v = initial;
  for (const auto& ev : events) {
    if (ev.kind != BuildEvent::Kind::Subdivide) continue;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == ev.r && v[(i + 1) % v.size()] == ev.s) {
        v.insert(v.begin() + static_cast<std::ptrdiff_t>(i + 1), ev.m);
        break;
      }
    }
  }
  const std::size_t n = v.size();
  auto find_arc = [&](const Cusp& r, const Cusp& s) -> std::size_t {
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] == r && v[(i + 1) % n] == s) return i;
    }
    throw Error(ErrorKind::InvalidInput, "trace refers to a missing arc");
  };
  std::vector<std::size_t> p(n, SIZE_MAX);
  std::vector<int> e(n, 0);
  for (const auto& ev : events) {
    switch (ev.kind) {
      case BuildEvent::Kind::Subdivide: break;
      case BuildEvent::Kind::Order2:
      case BuildEvent::Kind::Order3: {
        const std::size_t i = find_arc(ev.r, ev.s);
        p[i] = i;
        e[i] = ev.kind == BuildEvent::Kind::Order2 ? 2 : 3;
        break;
      }
      case BuildEvent::Kind::Pair: {
        const std::size_t i = find_arc(ev.r, ev.s), j = find_arc(ev.r2, ev.s2);
        p[i] = j;
        p[j] = i;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == SIZE_MAX) throw Error(ErrorKind::InvalidInput, "trace leaves an arc unpaired");
  }
  return ExtendedFareySymbol(std::move(v), std::move(p), std::move(e), level);
}

}  // namespace farey
