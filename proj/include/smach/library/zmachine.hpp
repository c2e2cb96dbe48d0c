#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "smach/engine.hpp"
#include "smach/library/primitive.hpp"

namespace smach {

// One Z-rule on the four letters L K P R. Stages of k and p are 1..3; tape
// letters are (copy, sign) with copy 1 = A' (sector LK), 2 = A'' (KP), 3 = A''' (PR).
struct ZStep {
  int kind;  // 1..4
  int k_from, k_to, p_from, p_to;
  std::vector<std::pair<int, int>> k_left, k_right, p_left, p_right;
  std::set<int> locks;
};

// Left: the p-letter sweeps the KP sector (the machine written with a left
// arrow). Right: the k-letter sweeps it and the PR sector stays locked.
inline std::vector<ZStep> z_steps(Direction d) {
  if (d == Direction::Left)
    return {{1, 1, 1, 1, 1, {}, {}, {{2, -1}}, {{3, 1}}, {1}},
            {2, 1, 2, 1, 2, {}, {}, {}, {}, {1, 2}},
            {3, 2, 2, 2, 2, {}, {}, {{2, 1}}, {{3, -1}}, {1}},
            {4, 2, 3, 2, 3, {}, {}, {}, {}, {1, 3}}};
  return {{1, 1, 1, 1, 1, {{1, 1}}, {{2, -1}}, {}, {}, {3}},
          {2, 1, 2, 1, 2, {}, {}, {}, {}, {2, 3}},
          {3, 2, 2, 2, 2, {{1, -1}}, {{2, 1}}, {}, {}, {3}},
          {4, 2, 3, 2, 3, {}, {}, {}, {}, {1, 3}}};
}

// Standalone Z-machine over the alphabet A. Input: L k(1) u'' p(1) R.
inline SMachine make_z_machine(Direction d, const std::vector<std::string>& alphabet) {
  if (alphabet.empty()) throw std::invalid_argument("z machine: empty alphabet");
  SMachine m;
  m.name = d == Direction::Left ? "Z-left" : "Z-right";
  m.hw.parts = {{"L", {"L"}}, {"K", {"k(1)", "k(2)", "k(3)"}}, {"P", {"p(1)", "p(2)", "p(3)"}}, {"R", {"R"}}};
  for (int c = 1; c <= 3; ++c) {
    Alphabet a{"A" + std::string(static_cast<std::size_t>(c), '\''), {}};
    for (const auto& x : alphabet) a.letters.push_back(x + std::string(static_cast<std::size_t>(c), '\''));
    m.hw.tapes.push_back(a);
  }
  m.hw.index();
  auto tape = [&](const std::vector<std::pair<int, int>>& spec, std::uint32_t x) {
    Word w;
    for (auto [c, s] : spec) w.push({tape_letter(static_cast<std::uint32_t>(c), x), s});
    return w;
  };
  for (const auto& st : z_steps(d)) {
    const bool lettered = st.kind == 1 || st.kind == 3;
    for (std::uint32_t x = 0; x < (lettered ? alphabet.size() : 1); ++x) {
      Rule r;
      r.name = "chi" + std::to_string(st.kind) + (lettered ? "(" + alphabet[x] + ")" : "");
      r.permit = m.full_permit();
      for (int l : st.locks) std::fill(r.permit[static_cast<std::size_t>(l)].begin(), r.permit[static_cast<std::size_t>(l)].end(), 0);
      Word L = Word::letter(state_letter(0, 0)), R = Word::letter(state_letter(3, 0));
      auto k = [&](int c) { return Word::letter(state_letter(1, static_cast<std::uint32_t>(c - 1))); };
      auto p = [&](int c) { return Word::letter(state_letter(2, static_cast<std::uint32_t>(c - 1))); };
      r.parts = {{L, L},
                 {k(st.k_from), tape(st.k_left, x) * k(st.k_to) * tape(st.k_right, x)},
                 {p(st.p_from), tape(st.p_left, x) * p(st.p_to) * tape(st.p_right, x)},
                 {R, R}};
      m.rules.push_back(std::move(r));
    }
  }
  m.input = parse_word(m.hw, "L k(1) p(1) R");
  m.input_sectors = {2};
  m.accept = parse_word(m.hw, "L k(3) p(3) R");
  m.finalize();
  return m;
}

// History of the pass L k(1) u'' p(1) R -> L k(3) u'' p(3) R.
inline Word z_canonical_history(const SMachine& z, Direction d, const Word& u) {
  Word h;
  auto rule = [&](const std::string& n, int sign) {
    h.push({rule_letter(static_cast<std::uint32_t>(*z.rule_index(n))), sign});
  };
  auto name = [&](const Sym& s) {
    std::string n = z.hw.name(s.letter);
    return n.substr(0, n.size() - 2);  // strip the '' of the A'' copy
  };
  std::vector<Sym> us(u.begin(), u.end());
  if (d == Direction::Left) {
    for (auto it = us.rbegin(); it != us.rend(); ++it) rule("chi1(" + name(*it) + ")", it->sign);
    rule("chi2", 1);
    for (const auto& s : us) rule("chi3(" + name(s) + ")", s.sign);
  } else {
    for (const auto& s : us) rule("chi1(" + name(s) + ")", s.sign);
    rule("chi2", 1);
    for (auto it = us.rbegin(); it != us.rend(); ++it) rule("chi3(" + name(*it) + ")", it->sign);
  }
  rule("chi4", 1);
  return h;
}

}  // namespace smach
