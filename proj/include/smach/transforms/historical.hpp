#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smach/engine.hpp"
#include "smach/transforms/common.hpp"

namespace smach {

// Part indices of the machine with historical sectors: Q_{0,r} = 0,
// Q_{i,l} = 2i-1, Q_{i,r} = 2i, Q_{N,l} = 2N-1. The working sector Y_j sits at
// sector 2j-1, the historical sector X_i at sector 2i.
inline std::uint32_t hist_left_part(std::size_t i) { return static_cast<std::uint32_t>(2 * i - 1); }
inline std::uint32_t hist_right_part(std::size_t i) { return static_cast<std::uint32_t>(2 * i); }
inline std::size_t working_sector(std::size_t j) { return 2 * j - 1; }
inline std::size_t historical_sector(std::size_t i) { return 2 * i; }

namespace detail {

// Index of the unique positive rule whose U (or V) state letters are `states`.
inline std::optional<std::size_t> unique_rule_with_states(const SMachine& m, const Word& states, bool from) {
  std::optional<std::size_t> hit;
  auto want = state_letters(states);
  for (std::size_t k = 0; k < m.rules.size(); ++k) {
    std::vector<Letter> got;
    for (const auto& p : m.rules[k].parts) {
      auto s = state_letters(from ? p.from : p.to);
      got.insert(got.end(), s.begin(), s.end());
    }
    if (got != want) continue;
    if (hit) return std::nullopt;
    hit = k;
  }
  return hit;
}

}  // namespace detail

// Splits every state letter of a standard-base word of m into its two copies,
// with the given historical sector contents (empty by default).
inline Word historical_word(const Word& w, const std::vector<Word>& hist = {}) {
  auto states = state_letters(w);
  auto secs = sectors_of(w);
  std::vector<Letter> hs;
  std::vector<Word> hsec;
  const std::size_t N = states.size() - 1;
  for (std::size_t i = 0; i <= N; ++i) {
    if (i > 0) hs.push_back(state_letter(hist_left_part(i), states[i].symbol));
    if (i < N) hs.push_back(state_letter(hist_right_part(i), states[i].symbol));
  }
  for (std::size_t j = 1; j <= N; ++j) {
    hsec.push_back(map_letters(secs[j - 1], [](Letter l) {
      return tape_letter(static_cast<std::uint32_t>(working_sector(l.alphabet)), l.symbol);
    }));
    if (j < N) hsec.push_back(j - 1 < hist.size() ? hist[j - 1] : Word{});
  }
  return standard_word(hs, hsec);
}

// The machine m with a historical sector between the left and right copies of
// every inner part. Rule theta multiplies historical sector i by
// a_{theta,i}^{-1} on the left and by b_{theta,i} on the right.
inline SMachine add_historical_sectors(const SMachine& m) {
  if (!has_simple_parts(m) || !is_normalized(m))
    throw std::invalid_argument("historical sectors need one-letter parts moving at most one letter per side; normalize first");
  const std::size_t N = m.N();
  const std::size_t R = m.rules.size();
  SMachine h;
  h.name = m.name + "-hist";
  for (std::size_t i = 0; i <= N; ++i) {
    auto copy = [&](const std::string& sfx) {
      Alphabet a{m.hw.parts[i].name + sfx, {}};
      for (const auto& l : m.hw.parts[i].letters) a.letters.push_back(l + sfx);
      return a;
    };
    if (i > 0) h.hw.parts.push_back(copy(".l"));
    if (i < N) h.hw.parts.push_back(copy(".r"));
  }
  for (std::size_t j = 1; j <= N; ++j) {
    h.hw.tapes.push_back(m.hw.tape(j));
    if (j == N) break;
    Alphabet x{"X" + std::to_string(j), {}};
    for (const auto& r : m.rules) x.letters.push_back("L" + std::to_string(j) + ":" + r.name);
    for (const auto& r : m.rules) x.letters.push_back("R" + std::to_string(j) + ":" + r.name);
    h.hw.tapes.push_back(x);
  }
  h.hw.index();

  auto tape = [&](const Word& w) {
    return map_letters(w, [](Letter l) { return tape_letter(static_cast<std::uint32_t>(working_sector(l.alphabet)), l.symbol); });
  };
  auto state = [](Letter q, bool left) {
    return Word::letter(state_letter(left ? hist_left_part(q.alphabet) : hist_right_part(q.alphabet), q.symbol));
  };
  auto a_letter = [&](std::size_t k, std::size_t i) {
    return Word::letter(tape_letter(static_cast<std::uint32_t>(historical_sector(i)), static_cast<std::uint32_t>(k)));
  };
  auto b_letter = [&](std::size_t k, std::size_t i) {
    return Word::letter(tape_letter(static_cast<std::uint32_t>(historical_sector(i)), static_cast<std::uint32_t>(R + k)));
  };

  std::optional<std::size_t> start, stop;
  if (m.input) start = detail::unique_rule_with_states(m, *m.input, true);
  if (m.accept) stop = detail::unique_rule_with_states(m, *m.accept, false);

  for (std::size_t k = 0; k < R; ++k) {
    const Rule& th = m.rules[k];
    Rule r;
    r.name = th.name;
    r.permit = h.full_permit();
    for (std::size_t j = 1; j <= N; ++j) r.permit[working_sector(j)] = th.permit[j];
    for (std::size_t i = 1; i < N; ++i) {
      auto& row = r.permit[historical_sector(i)];
      // start rules see no right letters, stop rules no left letters
      if (start == k) std::fill(row.begin() + static_cast<std::ptrdiff_t>(R), row.end(), 0);
      if (stop == k) std::fill(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(R), 0);
    }
    for (const auto& p : th.parts) {
      SimpleSide u = *simple_side(p.from), v = *simple_side(p.to);
      const std::size_t i = u.q.alphabet;
      if (i > 0) {
        Word hu = i < N ? a_letter(k, i) : Word{};
        r.parts.push_back({tape(u.v) * state(u.q, true) * hu, tape(v.v) * state(v.q, true)});
      }
      if (i < N) {
        Word hb = i > 0 ? b_letter(k, i) : Word{};
        r.parts.push_back({state(u.q, false) * tape(u.u), hb * state(v.q, false) * tape(v.u)});
      }
    }
    h.rules.push_back(std::move(r));
  }
  if (m.input) {
    h.input = historical_word(*m.input);
    for (auto j : m.input_sectors) h.input_sectors.push_back(working_sector(j));
  }
  if (m.accept) h.accept = historical_word(*m.accept);
  h.finalize();
  return h;
}

}  // namespace smach
