#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smach/machine.hpp"

namespace smach {

// One side v q u of a part with a one-letter base.
struct SimpleSide {
  Word v;
  Letter q;
  Word u;
};

inline std::optional<SimpleSide> simple_side(const Word& w) {
  std::optional<std::size_t> at;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].letter.kind != Kind::State) continue;
    if (at) return std::nullopt;
    at = i;
  }
  if (!at) return std::nullopt;
  return SimpleSide{w.sub(0, *at), w[*at].letter, w.sub(*at + 1, w.size())};
}

// Property (1): every part has a one-letter base.
inline bool has_simple_parts(const SMachine& m) {
  for (const auto& r : m.rules)
    for (const auto& p : r.parts)
      if (!simple_side(p.from) || !simple_side(p.to)) return false;
  return true;
}

// Property (2): ||v||+||v'|| <= 1 and ||u||+||u'|| <= 1 in every part.
// Property (3): the sum over all parts of a rule is at most 1.
inline bool rule_is_short(const Rule& r, bool total) {
  std::size_t sum = 0;
  for (const auto& p : r.parts) {
    auto a = simple_side(p.from), b = simple_side(p.to);
    if (!a || !b) return false;
    std::size_t left = a->v.size() + b->v.size(), right = a->u.size() + b->u.size();
    if (left > 1 || right > 1) return false;
    sum += left + right;
  }
  return !total || sum <= 1;
}

inline bool is_normalized(const SMachine& m, bool property3 = false) {
  for (const auto& r : m.rules)
    if (!rule_is_short(r, property3)) return false;
  return true;
}

// Name not yet used by any letter of hw (nor in `taken`).
inline std::string fresh_name(const Hardware& hw, std::set<std::string>& taken, std::string base) {
  auto used = [&](const std::string& n) {
    if (taken.count(n)) return true;
    for (const auto& p : hw.parts)
      for (const auto& l : p.letters)
        if (l == n) return true;
    for (const auto& t : hw.tapes)
      for (const auto& l : t.letters)
        if (l == n) return true;
    return false;
  };
  while (used(base)) base += "'";
  taken.insert(base);
  return base;
}

// Adds every tape letter written by the rule to its permission sets,
// leaving locked sectors locked.
inline std::vector<std::vector<char>> widened_permit(const Rule& r) {
  auto p = r.permit;
  for (const auto& part : r.parts)
    for (const Word* w : {&part.from, &part.to})
      for (const auto& s : *w)
        if (s.letter.kind == Kind::Tape && !r.locks(s.letter.alphabet)) p[s.letter.alphabet][s.letter.symbol] = 1;
  return p;
}

// Replaces every letter of w via `f` (identity on letters f does not touch).
template <class F>
Word map_letters(const Word& w, F f) {
  Word out;
  for (const auto& s : w) out.push({f(s.letter), s.sign});
  return out;
}

}  // namespace smach
