#include <catch_amalgamated.hpp>

#include "farey/constructor.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace farey;

TEST_CASE("gamma0 oracle") {
  const auto o = gamma0_oracle(15);
  CHECK(o(IMat(2, -1, 15, -7)));
  CHECK_FALSE(o(IMat(-1, 0, 5, -1)));
  CHECK(gamma0_oracle(1)(IMat(2, 1, 1, 1)));
  CHECK_THROWS_MATCHES(gamma0_oracle(0), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == ErrorKind::InvalidLevel; }));
  CHECK_THROWS_AS(gamma0_oracle(-4), Error);
}

TEST_CASE("coset key separates exactly the cosets") {
  for (long n : {1L, 2L, 4L, 12L, 15L, 36L, 49L}) {
    const auto o = gamma0_oracle(n);
    std::vector<IMat> mats;
    const IMat T(1, 1, 0, 1), S(0, -1, 1, 0);
    IMat g;
    for (int i = 0; i < 60; ++i) {
      g = g * power(T, (i * 7) % 5 - 2) * S;
      mats.push_back(g);
    }
    for (const auto& x : mats) {
      for (const auto& y : mats) {
        CHECK((o.coset_key(x) == o.coset_key(y)) == o(x * inverse_sl2(y)));
      }
    }
  }
}

TEST_CASE("small levels") {
  const auto f1 = build_unimodular(gamma0_oracle(1));
  REQUIRE(f1.size() == 2);
  CHECK(f1.vertex(0) == Cusp::infinity());
  CHECK(f1.vertex(1) == Cusp(0, 1));
  CHECK(f1.ell_order(0) == 2);
  CHECK(f1.ell_order(1) == 3);
  CHECK(f1.is_valid());

  const auto f2 = build_unimodular(gamma0_oracle(2));
  REQUIRE(f2.size() == 3);
  CHECK(f2.vertex(2) == Cusp(1, 1));
  CHECK(f2.partner(0) == 2);
  CHECK(f2.ell_order(1) == 2);
  CHECK(f2.gluing(1) == IMat(-1, 1, -2, 1));
}

TEST_CASE("gamma0(15) reproduces the fixture") {
  const auto f = build_unimodular(gamma0_oracle(15));
  CHECK(f == fixtures::gamma0_15());
}

TEST_CASE("output properties over a range of levels") {
  for (long n = 1; n <= 60; ++n) {
    const auto o = gamma0_oracle(n);
    BuildTrace trace;
    const auto f = build_unimodular(o, &trace);
    INFO("N = " << n);
    REQUIRE(f.is_valid());
    CHECK(f.is_unimodular());
    CHECK(group_contains_check(f, o));
    std::size_t nu3 = 0;
    for (std::size_t i = 0; i < f.size(); ++i) nu3 += f.ell_order(i) == 3;
    const auto ref = oracle::gamma0_bruteforce(n);
    CHECK(static_cast<long>(3 * (f.size() - 2) + nu3) == ref.index);
    CHECK(trace.replay(f.level()) == f);
    CHECK(build_unimodular(o) == f);
  }
}

TEST_CASE("fast builder matches the rescan procedure") {
  for (long n = 1; n <= 40; ++n) {
    const auto o = gamma0_oracle(n);
    MembershipOracle plain = o;
    plain.coset_key = nullptr;
    INFO("N = " << n);
    const auto ref = build_unimodular_reference(o);
    CHECK(build_unimodular(o) == ref);
    CHECK(build_unimodular(plain) == ref);
  }
}

TEST_CASE("iteration cap") {
  // Translations only: infinite index.
  MembershipOracle o;
  o.contains = [](const IMat& g) { return sgn(g.c) == 0; };
  o.index_bound = 50;
  CHECK_THROWS_MATCHES(build_unimodular(o), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::LikelyInfiniteIndex;
                       }));
}
