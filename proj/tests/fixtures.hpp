#pragma once

#include <string>
#include <vector>

#include "farey/symbol.hpp"

namespace fixtures {

inline farey::ExtendedFareySymbol make(const std::vector<std::string>& vs,
                                       std::vector<std::size_t> pairing, std::vector<int> ell,
                                       std::optional<long long> level = std::nullopt) {
  std::vector<farey::Cusp> v;
  for (const auto& s : vs) v.push_back(farey::Cusp::parse(s));
  return farey::ExtendedFareySymbol(std::move(v), std::move(pairing), std::move(ell), level);
}

/// Unimodular symbol for Gamma0(15) with the pairing listed in the
/// literature: (oo,0)-(1,oo), (0,1/5)-(2/5,1/2), (1/5,1/4)-(1/2,3/5),
/// (1/4,1/3)-(2/3,1), (1/3,2/5)-(3/5,2/3).
inline farey::ExtendedFareySymbol gamma0_15() {
  return make({"1/0", "0/1", "1/5", "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "1/1"},
              {9, 5, 6, 8, 7, 1, 2, 4, 3, 0}, std::vector<int>(10, 0), 15);
}

}  // namespace fixtures
