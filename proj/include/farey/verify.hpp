#pragma once

// Invariant suite for one level of Gamma0(N), as run by `farey scan`.

#include <string>
#include <vector>

#include "farey/classical.hpp"
#include "farey/constructor.hpp"
#include "farey/invariants.hpp"
#include "farey/normalizer.hpp"

namespace farey {

struct LevelReport {
  long long level = 0;
  std::size_t size = 0;
  Counts counts;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// gamma^2 = +-1 on order 2 arcs, 1 + gamma + gamma^2 = 0 on order 3 arcs.
inline bool elliptic_identities_hold(const ExtendedFareySymbol& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const IMat g = f.gluing(i);
    if (f.ell_order(i) == 2 && !is_pm_identity(g * g)) return false;
    if (f.ell_order(i) == 3 && !(IMat() + g + g * g).is_zero()) return false;
  }
  return true;
}

/// Stabilizer words are parabolic and fix their cusp, widths are positive
/// and add up to the index.
inline bool cusp_identities_hold(const ExtendedFareySymbol& f, long index) {
  Int total = 0;
  for (const CuspClass& c : cusp_orbits(f)) {
    if (sgn(c.width) <= 0) return false;
    const IMat p = evaluate_word(f, c.stabilizer);
    const Int t = p.a + p.d;
    if (t != 2 && t != -2) return false;
    if (is_pm_identity(p) || moebius(p, c.representative) != c.representative) return false;
    total += c.width;
  }
  return total == index;
}

inline bool cross_expressible(const ExtendedFareySymbol& from, const ExtendedFareySymbol& to) {
  const WordSolver solver(to);
  for (std::size_t i = 0; i < from.size(); ++i) {
    const IMat g = from.gluing(i);
    const auto w = solver.express(g);
    if (!w || !psl_equal(evaluate_word(to, *w), g)) return false;
  }
  return true;
}

inline LevelReport verify_level(long long level) {
  LevelReport r;
  r.level = level;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) r.failures.emplace_back(what);
  };
  const auto o = gamma0_oracle(level);
  const auto u = build_unimodular(o);
  r.size = u.size();
  std::string why;
  expect(u.is_valid(&why), "unimodular symbol invalid");
  expect(u.is_unimodular(), "builder output not unimodular");
  expect(group_contains_check(u, o), "unimodular gluing outside the group");

  NormalizeOptions opt;
  opt.oracle = &o;
  const auto g = normalize(u, opt);
  expect(g.is_valid(&why), "normalized symbol invalid");
  expect(g.is_normalized(), "normalized symbol not in normal form");
  expect(group_contains_check(g, o), "normalized gluing outside the group");

  r.counts = counts(u);
  const Counts cn = counts(g);
  const auto ref = classical::gamma0_data(level);
  expect(r.counts == cn, "counts differ between representations");
  expect(r.counts.genus == static_cast<long>(ref.genus), "genus differs from the formula");
  expect(r.counts.cusps == static_cast<long>(ref.cusps), "cusp count differs from the formula");
  expect(r.counts.nu2 == static_cast<long>(ref.nu2), "nu2 differs from the formula");
  expect(r.counts.nu3 == static_cast<long>(ref.nu3), "nu3 differs from the formula");
  expect(r.counts.index == static_cast<long>(ref.index), "index differs from the formula");

  expect(check_relations(u) && check_relations(g), "gluing relations fail");
  expect(check_cusp_structure(g), "pair-block cusp structure fails");
  expect(elliptic_identities_hold(u) && elliptic_identities_hold(g), "elliptic identity fails");
  expect(cusp_identities_hold(u, r.counts.index) && cusp_identities_hold(g, cn.index),
         "cusp stabilizer identity fails");
  expect(static_cast<long>(generators(g).symplectic.size()) == cn.genus,
         "symplectic pairs differ from the genus");
  expect(cross_expressible(u, g) && cross_expressible(g, u), "generators not cross-expressible");
  return r;
}

}  // namespace farey
