#pragma once

#include <random>
#include <string>
#include <vector>

#include "treq/common.hpp"

namespace testutil {

inline std::string random_dna(std::mt19937_64& rng, std::size_t n) {
  std::string s(n, 'A');
  for (auto& c : s) c = "ACGT"[rng() % 4];
  return s;
}

/// Substitutes position `pos` with a different base.
inline std::string mutate(std::string s, std::size_t pos, std::size_t step = 1) {
  const auto code = treq::encode_base(s[pos]);
  s[pos] = "ACGT"[(code + step) % 4];
  return s;
}

inline std::vector<std::uint8_t> codes(const std::string& s) { return treq::encode(s); }

}  // namespace testutil
