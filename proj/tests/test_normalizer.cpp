#include <catch_amalgamated.hpp>

#include "farey/constructor.hpp"
#include "farey/normalizer.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace farey;

namespace {

bool has_kind(const Error& e, ErrorKind k) { return e.kind() == k; }

std::size_t count_fixed(const ExtendedFareySymbol& f) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < f.size(); ++i) k += f.is_fixed(i);
  return k;
}

}  // namespace

TEST_CASE("non-elliptic cuts on gamma0(15)") {
  const auto f = fixtures::gamma0_15();
  const auto o = gamma0_oracle(15);
  const std::size_t n = f.size();
  std::size_t tried = 0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c1 = 0; c1 < n; ++c1) {
      for (std::size_t c2 = 0; c2 < n; ++c2) {
        if (c1 == c2) continue;
        for (auto side : {CutSide::PivotBlock, CutSide::OtherBlock}) {
          OpResult r{f, {}};
          try {
            r = base_cut_nonelliptic(f, p, c1, c2, side);
          } catch (const Error& e) {
            INFO(e.what());
            CHECK(has_kind(e, ErrorKind::InvalidCut));
            continue;
          }
          ++tried;
          INFO("pivot " << p << " cuts " << c1 << "," << c2);
          REQUIRE(r.symbol.is_valid(nullptr, false));
          CHECK(group_contains_check(r.symbol, o));
          CHECK(psl_equal(r.symbol.gluing(r.index_map[p]), f.gluing(p)));
          CHECK(r.symbol.partner(r.index_map[p]) == r.index_map[f.partner(p)]);
        }
      }
    }
  }
  CHECK(tried > 100);
}

TEST_CASE("cut arguments are checked") {
  const auto f = fixtures::gamma0_15();
  auto invalid_cut = Catch::Matchers::Predicate<Error>(
      [](const Error& e) { return has_kind(e, ErrorKind::InvalidCut); });
  // pivot 1 and partner 5 on the same side
  CHECK_THROWS_MATCHES(base_cut_nonelliptic(f, 1, 0, 7, CutSide::PivotBlock), Error, invalid_cut);
  CHECK_THROWS_MATCHES(base_cut_nonelliptic(f, 1, 3, 3, CutSide::PivotBlock), Error, invalid_cut);
  CHECK_THROWS_MATCHES(base_cut_elliptic(f, 1, 0, EllipticSide::After), Error, invalid_cut);
}

TEST_CASE("elliptic cuts on gamma0(13)") {
  const auto f = fixtures::make({"1/0", "0/1", "1/3", "1/2", "2/3", "1/1"}, {5, 1, 2, 3, 4, 0},
                                {0, 3, 2, 2, 3, 0}, 13);
  const auto o = gamma0_oracle(13);
  for (std::size_t p = 1; p <= 4; ++p) {
    for (std::size_t c = 0; c < f.size(); ++c) {
      for (auto side : {EllipticSide::Before, EllipticSide::After}) {
        INFO("pivot " << p << " cut " << c);
        const auto r = base_cut_elliptic(f, p, c, side);
        REQUIRE(r.symbol.is_valid(nullptr, false));
        CHECK(group_contains_check(r.symbol, o));
        CHECK(r.symbol.ell_order(r.index_map[p]) == f.ell_order(p));
        const std::size_t at = r.index_map[p];
        CHECK((side == EllipticSide::Before ? r.symbol.vertex(at) : r.symbol.vertex(at + 1)) ==
              f.vertex(c));
      }
    }
  }
}

TEST_CASE("normalized counts for known levels") {
  const auto n15 = normalize(build_unimodular(gamma0_oracle(15)));
  CHECK(n15.factorize().count(Block::Kind::Pair) == 3);
  CHECK(n15.factorize().count(Block::Kind::Quad) == 1);

  const auto n20 = normalize(build_unimodular(gamma0_oracle(20)));
  CHECK(n20.factorize().count(Block::Kind::Pair) == 5);
  CHECK(n20.factorize().count(Block::Kind::Quad) == 1);

  const auto u37 = build_unimodular(gamma0_oracle(37));
  CHECK(count_fixed(u37) == 4);
  const auto n37 = normalize(u37);
  const auto fd = n37.factorize();
  CHECK(fd.count(Block::Kind::Quad) == 2);
  CHECK(fd.count(Block::Kind::Pair) == 1);
  CHECK(fd.count(Block::Kind::Fixed) == 4);
}

TEST_CASE("normalization over a range of levels") {
  for (long n = 1; n <= 120; ++n) {
    const auto o = gamma0_oracle(n);
    const auto f = build_unimodular(o);
    const auto ref = oracle::gamma0_bruteforce(n);
    for (int variant = 0; variant < 4; ++variant) {
      INFO("N = " << n << " variant " << variant);
      NormalizeOptions opt;
      opt.strategy = variant % 2 ? HyperbolicStrategy::AdjacentAlt : HyperbolicStrategy::Adjacent;
      opt.pivots = variant / 2 ? PivotRule::First : PivotRule::Cheapest;
      opt.validate_every = n <= 40 ? 1 : 0;
      opt.oracle = &o;
      std::size_t steps = 0, last_w = 0;
      opt.on_step = [&](const StepInfo& s) {
        ++steps;
        CHECK(s.w_before == last_w);
        CHECK(s.w_after > s.w_before);
        last_w = s.w_after;
      };
      const auto g = normalize(f, opt);
      REQUIRE(g.is_valid());
      CHECK(g.size() == f.size());
      CHECK(g.is_normalized());
      CHECK(g.vertex(0) == Cusp::infinity());
      CHECK(g.vertex(1) == Cusp(0, 1));
      CHECK(group_contains_check(g, o));
      const auto fd = g.factorize();
      CHECK(static_cast<long>(fd.count(Block::Kind::Quad)) == ref.genus);
      CHECK(static_cast<long>(fd.count(Block::Kind::Pair)) == ref.cusps - 1);
      std::size_t nu2 = 0, nu3 = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        nu2 += g.ell_order(i) == 2;
        nu3 += g.ell_order(i) == 3;
      }
      CHECK(static_cast<long>(nu2) == ref.nu2);
      CHECK(static_cast<long>(nu3) == ref.nu3);
      CHECK(last_w == g.size());
      CHECK(steps > 0);
    }
  }
}

TEST_CASE("normalize is idempotent on normalized input") {
  const auto g = normalize(build_unimodular(gamma0_oracle(33)));
  std::size_t cuts = 0;
  NormalizeOptions opt;
  opt.on_intermediate = [&](const ExtendedFareySymbol&) { ++cuts; };
  CHECK(normalize(g, opt) == g);
  CHECK(cuts == 0);
}

TEST_CASE("single steps") {
  NormalizationState st{build_unimodular(gamma0_oracle(15)), 0, 0};
  const auto first = siegel_step(st);
  CHECK(first.kind == StepKind::Initial);
  CHECK(st.w_len == 2);
  while (st.w_len < st.symbol.size()) siegel_step(st);
  CHECK(st.symbol.is_normalized());
  CHECK_THROWS_AS(siegel_step(st), Error);
}

TEST_CASE("unsupported position of the (oo, 0) arc") {
  // (oo,0) paired with (1/2,1) across (0,1/2)
  const auto f = fixtures::make({"1/0", "0/1", "1/2", "1/1"}, {2, 1, 0, 3}, {0, 2, 0, 2});
  if (f.is_valid()) {
    CHECK_THROWS_MATCHES(normalize(f), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return has_kind(e, ErrorKind::Unsupported); }));
  }
}
