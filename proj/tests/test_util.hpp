#pragma once

#include <random>
#include <vector>

#include "smach/word.hpp"

namespace testutil {

// Random raw sequence over tape letters 0..alph-1 of alphabet 1.
inline std::vector<smach::Sym> random_syms(std::mt19937_64& rng, int alph, int max_len) {
  std::vector<smach::Sym> out;
  int n = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
  for (int i = 0; i < n; ++i)
    out.push_back({smach::tape_letter(1, static_cast<std::uint32_t>(rng() % static_cast<unsigned>(alph))),
                   rng() % 2 ? 1 : -1});
  return out;
}

}  // namespace testutil
