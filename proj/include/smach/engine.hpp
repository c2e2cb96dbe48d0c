#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smach/machine.hpp"

namespace smach {

struct BaseLetter {
  std::uint32_t part = 0;
  int sign = 1;
  auto operator<=>(const BaseLetter&) const = default;
  bool operator==(const BaseLetter&) const = default;
};
using Base = std::vector<BaseLetter>;

struct AdmissibleWord {
  Word word;
  std::vector<std::size_t> state_pos;  // positions of the state letters
  Base base;
  std::vector<Word> sectors;           // tape word between consecutive state letters

  std::size_t a_length() const { return smach::a_length(word); }
};

// Alphabet index of the sector between two consecutive base letters, or 0 if
// the pair cannot be consecutive in an admissible word.
inline std::uint32_t sector_alphabet(const Hardware& hw, BaseLetter x, BaseLetter y) {
  const std::uint32_t n = static_cast<std::uint32_t>(hw.N());
  if (x.sign > 0 && y.sign > 0 && y.part == x.part + 1) return x.part + 1;
  if (x.sign < 0 && y.sign < 0 && x.part == y.part + 1) return x.part;
  if (x.part == y.part && x.sign > 0 && y.sign < 0) return x.part + 1 <= n ? x.part + 1 : 0;
  if (x.part == y.part && x.sign < 0 && y.sign > 0) return x.part;
  return 0;
}

inline std::optional<AdmissibleWord> try_parse_admissible(const Hardware& hw, const Word& w, std::string* why = nullptr) {
  auto fail = [&](std::string msg) -> std::optional<AdmissibleWord> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  AdmissibleWord a;
  a.word = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i + 1 < w.size() && w[i].inverse_of(w[i + 1])) return fail("word is not reduced at position " + std::to_string(i));
    if (w[i].letter.kind == Kind::Rule) return fail("rule letter at position " + std::to_string(i));
    if (w[i].letter.kind == Kind::State) {
      a.state_pos.push_back(i);
      a.base.push_back({w[i].letter.alphabet, w[i].sign});
    }
  }
  if (a.state_pos.empty()) return fail("no state letters");
  if (a.state_pos.front() != 0 || a.state_pos.back() != w.size() - 1)
    return fail("word must start and end with state letters");
  for (std::size_t k = 0; k + 1 < a.state_pos.size(); ++k) {
    const Sym& x = w[a.state_pos[k]];
    const Sym& y = w[a.state_pos[k + 1]];
    BaseLetter bx{x.letter.alphabet, x.sign}, by{y.letter.alphabet, y.sign};
    std::uint32_t alph = sector_alphabet(hw, bx, by);
    // q u q^-1 and q^-1 u q need the same letter q on both sides
    if (bx.part == by.part && x.letter != y.letter) alph = 0;
    if (alph == 0) return fail("sector " + std::to_string(k + 1) + " has an inadmissible shape");
    Word sec = w.sub(a.state_pos[k] + 1, a.state_pos[k + 1]);
    for (const auto& s : sec)
      if (s.letter.alphabet != alph)
        return fail("sector " + std::to_string(k + 1) + " contains a letter outside Y_" + std::to_string(alph));
    a.sectors.push_back(std::move(sec));
  }
  return a;
}

inline AdmissibleWord parse_admissible(const Hardware& hw, const Word& w) {
  std::string why;
  auto a = try_parse_admissible(hw, w, &why);
  if (!a) throw std::invalid_argument("not admissible: " + why);
  return *a;
}

inline bool is_admissible(const Hardware& hw, const Word& w) { return try_parse_admissible(hw, w).has_value(); }

inline Base base_of(const Word& w) {
  Base b;
  for (const auto& s : w)
    if (s.letter.kind == Kind::State) b.push_back({s.letter.alphabet, s.sign});
  return b;
}

inline bool is_standard_base(const SMachine& m, const Base& b) {
  if (b.size() != m.N() + 1) return false;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i].part != i || b[i].sign != 1) return false;
  return true;
}

struct ApplyResult {
  std::optional<Word> word;
  std::string error;  // set when not applicable
};

// Applies theta^{+-1} to an admissible word. See the reading of the rule
// definition in the README: every state-letter occurrence is matched against
// U-bar^{+-1} of its part, replacements are substituted, the result is freely
// reduced and stray tape letters at both ends are trimmed.
inline ApplyResult apply_rule(const SMachine& m, const Sym& theta, const Word& w) {
  const CompiledRule& c = m.compiled(theta);
  const Rule& r = m.rule(theta);
  ApplyResult res;
  std::size_t sector = 0;
  for (const auto& s : w) {
    if (s.letter.kind == Kind::State) {
      ++sector;
      continue;
    }
    if (!r.permit[s.letter.alphabet][s.letter.symbol]) {
      res.error = "sector " + std::to_string(sector) + ": letter '" + m.hw.name(s.letter) + "' not permitted";
      return res;
    }
  }
  Word out;
  std::size_t i = 0;
  while (i < w.size()) {
    const Sym& s = w[i];
    if (s.letter.kind != Kind::State) {
      out.push(s);
      ++i;
      continue;
    }
    const std::int32_t pi = c.part_of[s.letter.alphabet];
    const CompiledPart& p = c.parts[static_cast<std::size_t>(pi)];
    const Word* pat = nullptr;
    const Word* rep = nullptr;
    if (s.sign > 0 && s.letter.alphabet == p.l) {
      pat = &p.bar;
      rep = &p.repl;
    } else if (s.sign < 0 && s.letter.alphabet == p.r) {
      pat = &p.bar_inv;
      rep = &p.repl_inv;
    }
    bool ok = pat && i + pat->size() <= w.size();
    for (std::size_t k = 0; ok && k < pat->size(); ++k) ok = w[i + k] == (*pat)[k];
    if (!ok) {
      res.error = "state letter '" + m.hw.name(s.letter) + "' at position " + std::to_string(i) +
                  " does not match the rule";
      return res;
    }
    out.append(*rep);
    i += pat->size();
  }
  std::size_t b = 0, e = out.size();
  while (b < e && out[b].letter.kind != Kind::State) ++b;
  while (e > b && out[e - 1].letter.kind != Kind::State) --e;
  res.word = (b == 0 && e == out.size()) ? std::move(out) : out.sub(b, e);
  return res;
}

inline bool applicable(const SMachine& m, const Sym& theta, const Word& w) { return apply_rule(m, theta, w).word.has_value(); }

inline Word apply(const SMachine& m, const Sym& theta, const Word& w) {
  auto r = apply_rule(m, theta, w);
  if (!r.word) throw std::domain_error("rule " + m.rules.at(theta.letter.symbol).name + (theta.sign < 0 ? "^-1" : "") +
                                       " not applicable: " + r.error);
  return *r.word;
}

struct Computation {
  Word start;
  Word history;
  std::vector<Word> trace;  // W_0 .. W_t

  const Word& end() const { return trace.back(); }
  std::size_t length() const { return history.size(); }
};

struct RunResult {
  Computation comp;             // successful prefix
  std::optional<std::size_t> failed_at;  // index of the inapplicable history letter
  std::string error;
  bool ok() const { return !failed_at; }
};

inline RunResult run(const SMachine& m, const Word& w0, const Word& history) {
  RunResult r;
  r.comp.start = w0;
  r.comp.trace.push_back(w0);
  for (std::size_t i = 0; i < history.size(); ++i) {
    auto a = apply_rule(m, history[i], r.comp.trace.back());
    if (!a.word) {
      r.failed_at = i;
      r.error = a.error;
      return r;
    }
    r.comp.history.push(history[i]);
    r.comp.trace.push_back(std::move(*a.word));
  }
  return r;
}

// Runs the history and throws on failure.
inline Computation run_checked(const SMachine& m, const Word& w0, const Word& history) {
  auto r = run(m, w0, history);
  if (!r.ok())
    throw std::domain_error("history letter " + std::to_string(*r.failed_at) + " inapplicable: " + r.error);
  return r.comp;
}

struct SearchLimits {
  std::size_t max_depth = 64;
  std::size_t max_a_length = 64;
  std::size_t max_configs = 5'000'000;
};

struct SearchResult {
  std::optional<Word> history;
  std::size_t explored = 0;
  bool truncated = false;  // a cap cut off part of the configuration graph
  SearchLimits limits;
};

// Breadth-first search for a shortest reduced history from w0 to a word
// satisfying `target`. Rule letters are expanded in the order of rule_letters().
inline SearchResult search_computations(const SMachine& m, const Word& w0, const std::function<bool(const Word&)>& target,
                                        const SearchLimits& lim) {
  SearchResult res;
  res.limits = lim;
  struct Node {
    std::size_t parent;
    Sym via;
    std::size_t depth;
  };
  std::vector<Word> words{w0};
  std::vector<Node> nodes{{0, {}, 0}};
  std::unordered_map<Word, std::size_t, WordHash> seen{{w0, 0}};
  const auto letters = m.rule_letters();
  auto path = [&](std::size_t k) {
    std::vector<Sym> rev;
    while (k != 0) {
      rev.push_back(nodes[k].via);
      k = nodes[k].parent;
    }
    Word h;
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) h.push(*it);
    return h;
  };
  if (target(w0)) {
    res.history = Word{};
    res.explored = 1;
    return res;
  }
  for (std::size_t head = 0; head < words.size(); ++head) {
    if (nodes[head].depth >= lim.max_depth) {
      res.truncated = true;
      continue;
    }
    for (const auto& th : letters) {
      auto a = apply_rule(m, th, words[head]);
      if (!a.word) continue;
      if (a_length(*a.word) > lim.max_a_length) {
        res.truncated = true;
        continue;
      }
      if (seen.count(*a.word)) continue;
      if (words.size() >= lim.max_configs) {
        res.truncated = true;
        res.explored = words.size();
        return res;
      }
      seen.emplace(*a.word, words.size());
      nodes.push_back({head, th, nodes[head].depth + 1});
      words.push_back(std::move(*a.word));
      if (target(words.back())) {
        res.history = path(words.size() - 1);
        res.explored = words.size();
        return res;
      }
    }
  }
  res.explored = words.size();
  return res;
}

// Lemma-facing helper: is the history a reduced word and does it replay?
inline bool replays(const SMachine& m, const Computation& c) {
  auto r = run(m, c.start, c.history);
  return r.ok() && r.comp.trace == c.trace;
}

}  // namespace smach
