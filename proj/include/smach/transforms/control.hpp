#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "smach/engine.hpp"
#include "smach/transforms/common.hpp"

namespace smach {

// Base P_0 Q_0 R_0 ... P_N Q_N R_N. Parts: P_i = 3i, Q_i = 3i+1, R_i = 3i+2.
// Sector R_{i-1}P_i (index 3i) carries the old Y_i; sectors P_iQ_i and Q_iR_i
// have empty alphabets.
inline std::size_t control_sector(std::size_t j) { return 3 * j; }

inline Word to_control_sector(const Word& w) {
  return map_letters(w, [](Letter l) {
    if (l.kind != Kind::Tape) return l;
    return tape_letter(static_cast<std::uint32_t>(control_sector(l.alphabet)), l.symbol);
  });
}

// Standard-base word of m with control letters placed around every state letter.
inline Word control_word(const Word& w) {
  auto states = state_letters(w);
  auto secs = sectors_of(w);
  std::vector<Letter> cs;
  std::vector<Word> csec;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto part = static_cast<std::uint32_t>(3 * i);
    cs.push_back(state_letter(part, 0));
    cs.push_back(state_letter(part + 1, states[i].symbol));
    cs.push_back(state_letter(part + 2, 0));
    csec.push_back({});
    csec.push_back({});
    if (i < secs.size()) csec.push_back(to_control_sector(secs[i]));
  }
  return standard_word(cs, csec);
}

// Drops the control letters of a standard-base word.
inline Word project_control(const Word& w) {
  Word out;
  for (const auto& s : w) {
    if (s.letter.kind == Kind::State) {
      if (s.letter.alphabet % 3 == 1) out.push({state_letter(s.letter.alphabet / 3, s.letter.symbol), s.sign});
    } else {
      out.push({tape_letter(s.letter.alphabet / 3, s.letter.symbol), s.sign});
    }
  }
  return out;
}

// Each part v q u -> v' q' u' of a rule becomes
// [v p_i ->l v' p_i], [q_i ->l q_i'], [r_i u -> r_i u'].
inline SMachine add_control_letters(const SMachine& m) {
  if (!has_simple_parts(m)) throw std::invalid_argument("control letters need one-letter parts; normalize first");
  const std::size_t N = m.N();
  SMachine c;
  c.name = m.name + "-ctl";
  std::set<std::string> taken;
  for (std::size_t i = 0; i <= N; ++i) {
    c.hw.parts.push_back({"P" + std::to_string(i), {fresh_name(m.hw, taken, "p" + std::to_string(i))}});
    c.hw.parts.push_back(m.hw.parts[i]);
    c.hw.parts.push_back({"R" + std::to_string(i), {fresh_name(m.hw, taken, "r" + std::to_string(i))}});
    c.hw.tapes.push_back({"P" + std::to_string(i) + "Q" + std::to_string(i), {}});
    c.hw.tapes.push_back({"Q" + std::to_string(i) + "R" + std::to_string(i), {}});
    if (i < N) c.hw.tapes.push_back(m.hw.tape(i + 1));
  }
  c.hw.index();

  auto state = [](std::uint32_t part, std::uint32_t sym) { return Word::letter(state_letter(part, sym)); };
  for (const auto& th : m.rules) {
    Rule r;
    r.name = th.name;
    r.permit = c.full_permit();
    for (std::size_t j = 1; j <= N; ++j) r.permit[control_sector(j)] = th.permit[j];
    for (const auto& p : th.parts) {
      SimpleSide u = *simple_side(p.from), v = *simple_side(p.to);
      const std::uint32_t i = u.q.alphabet;
      r.parts.push_back({to_control_sector(u.v) * state(3 * i, 0), to_control_sector(v.v) * state(3 * i, 0)});
      r.parts.push_back({state(3 * i + 1, u.q.symbol), state(3 * i + 1, v.q.symbol)});
      r.parts.push_back({state(3 * i + 2, 0) * to_control_sector(u.u), state(3 * i + 2, 0) * to_control_sector(v.u)});
    }
    c.rules.push_back(std::move(r));
  }
  if (m.input) {
    c.input = control_word(*m.input);
    for (auto s : m.input_sectors) c.input_sectors.push_back(control_sector(s));
  }
  if (m.accept) c.accept = control_word(*m.accept);
  c.finalize();
  return c;
}

}  // namespace smach
