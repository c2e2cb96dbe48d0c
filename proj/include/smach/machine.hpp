#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smach/word.hpp"

namespace smach {

struct Alphabet {
  std::string name;
  std::vector<std::string> letters;
};

// Q_0..Q_N and Y_1..Y_N. Tape alphabet Y_j is stored at tapes[j-1].
class Hardware {
 public:
  std::vector<Alphabet> parts;
  std::vector<Alphabet> tapes;

  std::size_t N() const { return parts.size() - 1; }
  const Alphabet& tape(std::size_t j) const { return tapes.at(j - 1); }
  std::size_t tape_size(std::size_t j) const { return j >= 1 && j <= tapes.size() ? tapes[j - 1].letters.size() : 0; }

  void index() {
    if (parts.size() < 2) throw std::invalid_argument("hardware needs at least two parts");
    if (tapes.size() != parts.size() - 1)
      throw std::invalid_argument("hardware needs exactly one tape alphabet per sector");
    by_name_.clear();
    for (std::uint32_t i = 0; i < parts.size(); ++i) {
      if (parts[i].letters.empty()) throw std::invalid_argument("part " + parts[i].name + " has no letters");
      for (std::uint32_t s = 0; s < parts[i].letters.size(); ++s) add(parts[i].letters[s], state_letter(i, s));
    }
    for (std::uint32_t j = 1; j <= tapes.size(); ++j)
      for (std::uint32_t s = 0; s < tapes[j - 1].letters.size(); ++s) add(tapes[j - 1].letters[s], tape_letter(j, s));
  }

  std::optional<Letter> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  Letter at(const std::string& name) const {
    auto l = find(name);
    if (!l) throw std::invalid_argument("unknown letter '" + name + "'");
    return *l;
  }

  const std::string& name(Letter l) const {
    if (l.kind == Kind::State) return parts.at(l.alphabet).letters.at(l.symbol);
    if (l.kind == Kind::Tape) return tapes.at(l.alphabet - 1).letters.at(l.symbol);
    throw std::invalid_argument("rule letter has no hardware name");
  }

  bool operator==(const Hardware& o) const {
    auto same = [](const std::vector<Alphabet>& a, const std::vector<Alphabet>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].name != b[i].name || a[i].letters != b[i].letters) return false;
      return true;
    };
    return same(parts, o.parts) && same(tapes, o.tapes);
  }

 private:
  void add(const std::string& n, Letter l) {
    if (n.empty() || n.find(' ') != std::string::npos || n.find('^') != std::string::npos)
      throw std::invalid_argument("bad letter name '" + n + "'");
    if (!by_name_.emplace(n, l).second) throw std::invalid_argument("letter name '" + n + "' used twice");
  }
  std::unordered_map<std::string, Letter> by_name_;
};

struct RulePart {
  Word from;  // U_i
  Word to;    // V_i
  bool operator==(const RulePart&) const = default;
};

struct Rule {
  std::string name;
  std::vector<RulePart> parts;
  // permit[j][s]: letter s of Y_j is in Y_j(theta). permit[0] is unused.
  std::vector<std::vector<char>> permit;

  bool locks(std::size_t j) const {
    for (char c : permit.at(j))
      if (c) return false;
    return true;
  }
  std::size_t permitted_count(std::size_t j) const {
    std::size_t n = 0;
    for (char c : permit.at(j)) n += c != 0;
    return n;
  }
  bool operator==(const Rule&) const = default;
};

// Shape of a rule side: consecutive state parts l..r, all with sign +1.
struct PartShape {
  std::uint32_t l = 0, r = 0;
  std::size_t first = 0, last = 0;  // positions of first/last state letter
};

inline PartShape part_shape(const Hardware& hw, const Word& w) {
  PartShape sh;
  bool seen = false;
  std::uint32_t expect = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Sym& s = w[i];
    if (s.letter.kind == Kind::Rule) throw std::invalid_argument("rule letter inside a rule part");
    if (s.letter.kind != Kind::State) continue;
    if (s.sign != 1) throw std::invalid_argument("rule part with an inverted state letter");
    if (!seen) {
      sh.l = s.letter.alphabet;
      sh.first = i;
      seen = true;
    } else if (s.letter.alphabet != expect) {
      throw std::invalid_argument("rule part state letters are not consecutive parts");
    }
    expect = s.letter.alphabet + 1;
    sh.r = s.letter.alphabet;
    sh.last = i;
  }
  if (!seen) throw std::invalid_argument("rule part without a state letter");
  // tape letters must sit in the sector they border
  std::uint32_t sector = sh.l;  // left of Q_l is sector Y_l
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Sym& s = w[i];
    if (s.letter.kind == Kind::State) {
      sector = s.letter.alphabet + 1;
      continue;
    }
    if (sector == 0 || sector > hw.N() || s.letter.alphabet != sector)
      throw std::invalid_argument("tape letter '" + hw.name(s.letter) + "' outside its sector");
  }
  return sh;
}

// Rule specialised to one polarity, ready for application.
struct CompiledPart {
  std::uint32_t l = 0, r = 0;
  Word bar;        // U-bar: from first to last state letter of U
  Word bar_inv;
  Word repl;       // u_0^{-1} V u_end^{-1}
  Word repl_inv;
};

struct CompiledRule {
  std::vector<std::int32_t> part_of;  // state part -> compiled part index
  std::vector<CompiledPart> parts;
};

inline CompiledRule compile_rule(const Hardware& hw, const Rule& r, int sign) {
  CompiledRule c;
  c.part_of.assign(hw.parts.size(), -1);
  for (const auto& p : r.parts) {
    const Word& u = sign > 0 ? p.from : p.to;
    const Word& v = sign > 0 ? p.to : p.from;
    PartShape sh = part_shape(hw, u);
    CompiledPart cp;
    cp.l = sh.l;
    cp.r = sh.r;
    cp.bar = u.sub(sh.first, sh.last + 1);
    cp.bar_inv = invert(cp.bar);
    cp.repl = invert(u.sub(0, sh.first)) * v * invert(u.sub(sh.last + 1, u.size()));
    cp.repl_inv = invert(cp.repl);
    for (std::uint32_t q = sh.l; q <= sh.r; ++q) c.part_of[q] = static_cast<std::int32_t>(c.parts.size());
    c.parts.push_back(std::move(cp));
  }
  return c;
}

class SMachine {
 public:
  std::string name;
  Hardware hw;
  std::vector<Rule> rules;  // positive rules; inverses are implicit
  std::optional<Word> input;               // state letters of the input configuration
  std::vector<std::size_t> input_sectors;  // sectors that carry the input
  std::optional<Word> accept;              // accept configuration

  // Validates rules and builds lookup tables. Must be called after edits.
  void finalize() {
    hw.index();
    rule_by_name_.clear();
    compiled_.clear();
    for (std::size_t k = 0; k < rules.size(); ++k) {
      Rule& r = rules[k];
      if (r.name.empty() || r.name.find(' ') != std::string::npos || r.name.find('^') != std::string::npos)
        throw std::invalid_argument("bad rule name '" + r.name + "'");
      if (!rule_by_name_.emplace(r.name, k).second) throw std::invalid_argument("rule name '" + r.name + "' used twice");
      validate(r);
    }
    for (const auto& r : rules) {
      compiled_.push_back(compile_rule(hw, r, 1));
      compiled_.push_back(compile_rule(hw, r, -1));
    }
  }

  std::size_t N() const { return hw.N(); }

  const CompiledRule& compiled(const Sym& rule) const {
    return compiled_.at(2 * rule.letter.symbol + (rule.sign > 0 ? 0 : 1));
  }
  const Rule& rule(const Sym& s) const { return rules.at(s.letter.symbol); }

  std::optional<std::size_t> rule_index(const std::string& n) const {
    auto it = rule_by_name_.find(n);
    if (it == rule_by_name_.end()) return std::nullopt;
    return it->second;
  }

  // All rule letters in the fixed search order theta_0, theta_0^-1, theta_1, ...
  std::vector<Sym> rule_letters() const {
    std::vector<Sym> out;
    for (std::uint32_t k = 0; k < rules.size(); ++k) {
      out.push_back({rule_letter(k), 1});
      out.push_back({rule_letter(k), -1});
    }
    return out;
  }

  std::string letter_name(const Letter& l) const {
    if (l.kind == Kind::Rule) return rules.at(l.symbol).name;
    return hw.name(l);
  }

  // Full permission on every sector.
  std::vector<std::vector<char>> full_permit() const {
    std::vector<std::vector<char>> p(N() + 1);
    for (std::size_t j = 1; j <= N(); ++j) p[j].assign(hw.tape_size(j), 1);
    return p;
  }

  bool operator==(const SMachine& o) const {
    return name == o.name && hw == o.hw && rules == o.rules && input == o.input &&
           input_sectors == o.input_sectors && accept == o.accept;
  }

 private:
  void validate(Rule& r) const {
    const std::size_t n = N();
    if (r.permit.empty()) r.permit = full_permit();
    if (r.permit.size() != n + 1) throw std::invalid_argument("rule " + r.name + ": permission table size");
    for (std::size_t j = 1; j <= n; ++j)
      if (r.permit[j].size() != hw.tape_size(j)) throw std::invalid_argument("rule " + r.name + ": permission row size");
    if (r.parts.empty()) throw std::invalid_argument("rule " + r.name + " has no parts");
    std::uint32_t next = 0;
    bool changes = false;
    for (const auto& p : r.parts) {
      PartShape a, b;
      try {
        a = part_shape(hw, p.from);
        b = part_shape(hw, p.to);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("rule " + r.name + ": " + e.what());
      }
      if (a.l != b.l || a.r != b.r) throw std::invalid_argument("rule " + r.name + ": part sides have different bases");
      if (a.l != next) throw std::invalid_argument("rule " + r.name + ": parts do not tile the base");
      next = a.r + 1;
      // a locked sector carries no tape letters in U or V
      for (const Word* w : {&p.from, &p.to})
        for (const auto& s : *w)
          if (s.letter.kind == Kind::Tape && r.locks(s.letter.alphabet))
            throw std::invalid_argument("rule " + r.name + ": tape letter '" + hw.name(s.letter) +
                                        "' in a locked sector");
      changes = changes || !(p.from == p.to);
    }
    if (next != n + 1) throw std::invalid_argument("rule " + r.name + ": parts do not cover the base");
    if (!changes) throw std::invalid_argument("rule " + r.name + " is an identity rule");
  }

  std::unordered_map<std::string, std::size_t> rule_by_name_;
  std::vector<CompiledRule> compiled_;
};

// ---- tokens -----------------------------------------------------------------

inline std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline std::pair<std::string, int> split_sign(const std::string& tok) {
  static const std::string inv = "^-1";
  if (tok.size() > inv.size() && tok.compare(tok.size() - inv.size(), inv.size(), inv) == 0)
    return {tok.substr(0, tok.size() - inv.size()), -1};
  return {tok, 1};
}

// Word over the hardware letters, tokens `name` / `name^-1`.
inline Word parse_word(const Hardware& hw, const std::string& text) {
  Word w;
  std::size_t pos = 0;
  for (const auto& tok : split_tokens(text)) {
    ++pos;
    auto [n, sign] = split_sign(tok);
    auto l = hw.find(n);
    if (!l) throw std::invalid_argument("token " + std::to_string(pos) + ": unknown letter '" + n + "'");
    w.push({*l, sign});
  }
  return w;
}
inline Word parse_word(const SMachine& m, const std::string& text) { return parse_word(m.hw, text); }

inline Word parse_history(const SMachine& m, const std::string& text) {
  Word w;
  std::size_t pos = 0;
  for (const auto& tok : split_tokens(text)) {
    ++pos;
    auto [n, sign] = split_sign(tok);
    auto k = m.rule_index(n);
    if (!k) throw std::invalid_argument("token " + std::to_string(pos) + ": unknown rule '" + n + "'");
    w.push({rule_letter(static_cast<std::uint32_t>(*k)), sign});
  }
  return w;
}

inline std::string format_word(const SMachine& m, const Word& w) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += m.letter_name(s.letter);
    if (s.sign < 0) out += "^-1";
  }
  return out;
}

// ---- construction helpers ------------------------------------------------------

// Convenience for building rules from text: each part is a pair of token strings;
// `locks` lists sector indices j with Y_j(theta) empty.
inline Rule make_rule(const SMachine& m, std::string name, const std::vector<std::pair<std::string, std::string>>& parts,
                      const std::set<std::size_t>& locks = {}) {
  Rule r;
  r.name = std::move(name);
  for (const auto& [u, v] : parts) r.parts.push_back({parse_word(m.hw, u), parse_word(m.hw, v)});
  r.permit = m.full_permit();
  for (auto j : locks) std::fill(r.permit.at(j).begin(), r.permit.at(j).end(), 0);
  return r;
}

// The standard-base word q_0 w_1 q_1 ... w_N q_N from state letters and sector contents.
inline Word standard_word(const std::vector<Letter>& states, const std::vector<Word>& sectors) {
  Word w;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0 && i - 1 < sectors.size()) w.append(sectors[i - 1]);
    w.push({states[i], 1});
  }
  return w;
}

inline std::vector<Letter> state_letters(const Word& w) {
  std::vector<Letter> out;
  for (const auto& s : w)
    if (s.letter.kind == Kind::State) out.push_back(s.letter);
  return out;
}

// Sector contents of a word with standard base.
inline std::vector<Word> sectors_of(const Word& w) {
  std::vector<Word> out;
  std::vector<Sym> cur;
  bool started = false;
  for (const auto& s : w) {
    if (s.letter.kind == Kind::State) {
      if (started) out.push_back(Word(cur));
      cur.clear();
      started = true;
    } else {
      cur.push_back(s);
    }
  }
  return out;
}

// Input configuration of m with the given contents in the input sectors.
inline Word input_word(const SMachine& m, const std::vector<Word>& contents) {
  if (!m.input) throw std::invalid_argument("machine has no input configuration");
  if (contents.size() != m.input_sectors.size()) throw std::invalid_argument("wrong number of input sectors");
  std::vector<Word> sectors(m.N());
  for (std::size_t i = 0; i < contents.size(); ++i) sectors.at(m.input_sectors[i] - 1) = contents[i];
  return standard_word(state_letters(*m.input), sectors);
}

inline Word power(const Word& w, long long k) {
  Word r;
  Word b = k >= 0 ? w : invert(w);
  for (long long i = 0; i < (k >= 0 ? k : -k); ++i) r.append(b);
  return r;
}

}  // namespace smach
