#include <catch_amalgamated.hpp>

#include <random>

#include "farey/constructor.hpp"
#include "farey/invariants.hpp"
#include "farey/normalizer.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace farey;

namespace {

bool has_kind(const Error& e, ErrorKind k) { return e.kind() == k; }

IMat random_sl2(std::mt19937_64& rng, int steps) {
  const IMat T(1, 1, 0, 1), S(0, -1, 1, 0);
  std::uniform_int_distribution<int> k(-4, 4);
  IMat g;
  for (int i = 0; i < steps; ++i) g = g * power(T, k(rng)) * S;
  return g;
}

IMat random_member(std::mt19937_64& rng, const ExtendedFareySymbol& f, int length) {
  std::uniform_int_distribution<std::size_t> arc(0, f.size() - 1);
  IMat g;
  for (int i = 0; i < length; ++i) g = g * f.gluing(arc(rng));
  return g;
}

std::vector<long> widths(const std::vector<CuspClass>& orbits) {
  std::vector<long> out;
  for (const auto& o : orbits) out.push_back(o.width.get_si());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("cusp orbits of small levels") {
  const auto o2 = cusp_orbits(build_unimodular(gamma0_oracle(2)));
  REQUIRE(o2.size() == 2);
  CHECK(o2[0].representative == Cusp::infinity());
  CHECK(o2[0].width == 1);
  CHECK(o2[1].vertices.size() == 2);
  CHECK(o2[1].width == 2);

  CHECK(cusp_orbits(fixtures::gamma0_15()).size() == 4);
  const auto o1 = cusp_orbits(build_unimodular(gamma0_oracle(1)));
  REQUIRE(o1.size() == 1);
  CHECK(o1[0].width == 1);
}

TEST_CASE("stabilizers and widths") {
  for (long n = 1; n <= 60; ++n) {
    INFO("N = " << n);
    const auto f = build_unimodular(gamma0_oracle(n));
    const auto g = normalize(f);
    const auto ref = oracle::gamma0_bruteforce(n);
    for (const auto* s : {&f, &g}) {
      const auto orbits = cusp_orbits(*s);
      CHECK(widths(orbits) == ref.widths);
      for (const auto& o : orbits) {
        const IMat m = evaluate_word(*s, o.stabilizer);
        CHECK(abs(m.trace()) == 2);
        CHECK(moebius(m, o.representative) == o.representative);
        CHECK(o.width > 0);
      }
    }
  }
}

TEST_CASE("counts") {
  CHECK(counts(fixtures::gamma0_15()) == Counts{1, 4, 0, 0, 24});
  CHECK(counts(build_unimodular(gamma0_oracle(37))) == Counts{2, 2, 2, 2, 38});
  CHECK(counts(build_unimodular(gamma0_oracle(11))) == Counts{1, 2, 0, 0, 12});
  for (long n = 1; n <= 80; ++n) {
    INFO("N = " << n);
    const auto f = build_unimodular(gamma0_oracle(n));
    const auto ref = oracle::gamma0_bruteforce(n);
    const Counts c = counts(f);
    CHECK(c == Counts{ref.genus, ref.cusps, ref.nu2, ref.nu3, ref.index});
    CHECK(counts(normalize(f)) == c);
  }
}

TEST_CASE("cusp classes of normalized symbols") {
  for (long n = 1; n <= 100; ++n) {
    INFO("N = " << n);
    CHECK(check_cusp_structure(normalize(build_unimodular(gamma0_oracle(n)))));
  }
  // the unimodular gamma0(15) symbol is not normalized and has no such split
  CHECK_THROWS_AS(check_cusp_structure(fixtures::gamma0_15()), Error);
}

TEST_CASE("generators") {
  const auto g14 = generators(normalize(build_unimodular(gamma0_oracle(14))));
  CHECK(g14.count(ArcClass::Hyperbolic) == 2);
  CHECK(g14.symplectic.size() == 1);

  const auto g15 = generators(normalize(fixtures::gamma0_15()));
  CHECK(g15.count(ArcClass::Hyperbolic) == 2);
  CHECK(g15.count(ArcClass::Parabolic) == 3);

  const auto g1 = generators(build_unimodular(gamma0_oracle(1)));
  CHECK(g1.generators.size() == 2);
  CHECK(g1.count(ArcClass::Elliptic2) == 1);
  CHECK(g1.count(ArcClass::Elliptic3) == 1);

  for (long n = 1; n <= 150; ++n) {
    INFO("N = " << n);
    const auto ref = oracle::gamma0_bruteforce(n);
    const auto f = normalize(build_unimodular(gamma0_oracle(n)));
    const auto gs = generators(f);
    CHECK(static_cast<long>(gs.symplectic.size()) == ref.genus);
    CHECK(static_cast<long>(gs.generators.size()) ==
          2 * ref.genus + ref.cusps - 1 + ref.nu2 + ref.nu3);
    CHECK(static_cast<long>(gs.count(ArcClass::Hyperbolic)) == 2 * ref.genus);
    CHECK(gs.generators.front().arc == *f.infinity_zero_arc());
    for (const auto& [a, b] : gs.symplectic) {
      CHECK(gs.generators[a].kind == ArcClass::Hyperbolic);
      CHECK(gs.generators[b].kind == ArcClass::Hyperbolic);
    }
  }
}

TEST_CASE("group ring arithmetic") {
  const IMat g(3, -1, 13, -4);  // order 3
  const auto mu = mu_element(g, 3);
  CHECK(mu.size() == 3);
  CHECK(((GroupRingElement::of(g) - GroupRingElement::one()) * mu).is_zero());
  const auto x = GroupRingElement::of(IMat(1, 1, 0, 1), 2) + GroupRingElement::of(IMat(-1, -1, 0, -1), -2);
  CHECK(x.is_zero());
  const auto y = GroupRingElement::of(IMat(1, 1, 0, 1), 3);
  for (const auto& [c, m] : (y + y).terms()) {
    CHECK(c == 6);
    CHECK(m == IMat(1, 1, 0, 1));
  }
}

TEST_CASE("delta0 presentation") {
  const auto f2 = build_unimodular(gamma0_oracle(2));
  const auto p2 = delta0_presentation(f2);
  REQUIRE(p2.generators.size() == 2);
  CHECK(p2.generators[0] == 0);
  CHECK(f2.is_fixed(p2.generators[1]));
  REQUIRE(p2.mu.size() == 1);
  CHECK(p2.mu[0].second.size() == 2);
  CHECK(check_relations(f2));

  const auto f13 = build_unimodular(gamma0_oracle(13));
  const auto p13 = delta0_presentation(f13);
  std::vector<std::size_t> sizes;
  for (const auto& [a, mu] : p13.mu) sizes.push_back(mu.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{2, 2, 3, 3});
  for (std::size_t k = 0; k < p13.generators.size(); ++k) {
    const std::size_t a = p13.generators[k];
    if (f13.is_fixed(a)) {
      CHECK(p13.lambda[k] == GroupRingElement::one());
    } else {
      CHECK(p13.lambda[k] ==
            GroupRingElement::one() - GroupRingElement::of(inverse_sl2(f13.gluing(a))));
    }
  }
  for (long n = 1; n <= 60; ++n) {
    INFO("N = " << n);
    const auto f = build_unimodular(gamma0_oracle(n));
    CHECK(check_relations(f));
    CHECK(check_relations(normalize(f)));
  }
}

TEST_CASE("resolution maps") {
  CHECK_THROWS_MATCHES(resolution_maps(fixtures::gamma0_15(), 0), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return has_kind(e, ErrorKind::InvalidStage); }));
  CHECK(resolution_maps(fixtures::gamma0_15(), 2).empty());
  const auto s1 = resolution_maps(fixtures::gamma0_15(), 1);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].size() == 5);

  const auto f13 = build_unimodular(gamma0_oracle(13));
  const auto m2 = resolution_maps(f13, 2), m3 = resolution_maps(f13, 3);
  REQUIRE(m2.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(m2[i].size() == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(m2[i][j].is_zero() == (i != j));
    // consecutive stages compose to zero
    CHECK((m3[i][i] * m2[i][i]).is_zero());
    CHECK((m2[i][i] * m3[i][i]).is_zero());
  }
  // stage 2 followed by the elliptic rows of stage 1
  const auto m1 = resolution_maps(f13, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t c = 0; c < m1[1 + i].size(); ++c) {
      CHECK((m2[i][i] * m1[1 + i][c]).is_zero());
    }
  }
}

TEST_CASE("word problem") {
  const auto f = fixtures::gamma0_15();
  const auto o = gamma0_oracle(15);
  const WordSolver solver(f);
  CHECK(solver.express(IMat()) == Word{});
  CHECK_FALSE(solver.express(IMat(1, 1, 1, 2)).has_value());
  CHECK_THROWS_MATCHES(solver.express(IMat(2, 0, 0, 1)), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return has_kind(e, ErrorKind::InvalidInput); }));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const IMat g = random_member(rng, f, 10);
    const auto w = solver.express(g);
    REQUIRE(w.has_value());
    CHECK(psl_equal(evaluate_word(f, *w), g));
  }
  for (int trial = 0; trial < 300; ++trial) {
    const IMat g = random_sl2(rng, 6);
    CHECK(solver.contains(g) == o(g));
  }
}

TEST_CASE("word problem agrees with the congruence test") {
  std::mt19937_64 rng(4);
  for (long n = 1; n <= 50; ++n) {
    INFO("N = " << n);
    const auto o = gamma0_oracle(n);
    const auto f = build_unimodular(o);
    const auto g = normalize(f);
    const WordSolver sf(f), sg(g);
    for (int trial = 0; trial < 60; ++trial) {
      const IMat m = random_sl2(rng, 5);
      CHECK(sf.contains(m) == o(m));
      CHECK(sg.contains(m) == o(m));
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto w = sg.express(f.gluing(i));
      REQUIRE(w.has_value());
      CHECK(psl_equal(evaluate_word(g, *w), f.gluing(i)));
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto w = sf.express(g.gluing(i));
      REQUIRE(w.has_value());
      CHECK(psl_equal(evaluate_word(f, *w), g.gluing(i)));
    }
  }
}

TEST_CASE("word problem near order-3 arcs") {
  // the edge of h runs along the triangle beyond an order-3 arc
  const auto f49 = build_unimodular(gamma0_oracle(49));
  CHECK_FALSE(WordSolver(f49).contains(IMat(-21, 8, -8, 3)));
  // with two arcs the polygon is a single geodesic
  const auto f1 = build_unimodular(gamma0_oracle(1));
  const WordSolver s1(f1);
  for (const IMat& g : {IMat(1, -1, 1, 0), IMat(-3, 1, -1, 0), IMat(2, 1, 1, 1)}) {
    const auto w = s1.express(g);
    REQUIRE(w.has_value());
    CHECK(psl_equal(evaluate_word(f1, *w), g));
  }
}
