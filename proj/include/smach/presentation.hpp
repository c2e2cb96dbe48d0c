#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "smach/engine.hpp"
#include "smach/io.hpp"

namespace smach {

using Rational = boost::multiprecision::cpp_rational;

// Theta-letters of a presentation are Kind::Rule letters whose `alphabet`
// field holds the copy index: theta_j sits in sector j, left of Q_j.
inline Letter theta_letter(std::size_t rule, std::size_t copy) {
  return {Kind::Rule, static_cast<std::uint32_t>(copy), static_cast<std::uint32_t>(rule)};
}

struct Presentation {
  std::vector<std::string> q_letters, a_letters, theta_letters;
  std::vector<Word> relators;  // (theta,q) then (theta,a) relators
  std::optional<Word> hub;     // (W_M)^L
  std::size_t copies = 0;      // theta copies per rule

  std::size_t relation_count() const { return relators.size() + (hub ? 1 : 0); }
};

inline std::string theta_name(const SMachine& m, const Letter& l) {
  return m.rules.at(l.symbol).name + "_" + std::to_string(l.alphabet);
}

inline std::string format_relator(const SMachine& m, const Word& w) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += s.letter.kind == Kind::Rule ? theta_name(m, s.letter) : m.hw.name(s.letter);
    if (s.sign < 0) out += "^-1";
  }
  return out;
}

// Smallest rotation, used to drop relators that are cyclic shifts of each other.
inline std::vector<Sym> min_rotation(const Word& w) {
  std::vector<Sym> best = w.syms();
  for (std::size_t r = 1; r < w.size(); ++r) {
    std::vector<Sym> rot(w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
    best = std::min(best, rot);
  }
  return best;
}

// Relators U_i theta_{r+1} V_i^-1 theta_l^-1 for every part U_i -> V_i with
// state letters of parts l..r, and theta_j a theta_j^-1 a^-1 for a in Y_j(theta).
// With a hub the base is read cyclically: theta_{N+1} is theta_0.
inline Presentation emit_presentation(const SMachine& m, long long L, const std::optional<Word>& hub = std::nullopt) {
  const std::size_t N = m.N();
  Presentation p;
  p.copies = hub ? N + 1 : N + 2;
  auto copy = [&](std::size_t j) { return hub && j == N + 1 ? 0 : j; };
  for (const auto& part : m.hw.parts) p.q_letters.insert(p.q_letters.end(), part.letters.begin(), part.letters.end());
  for (const auto& t : m.hw.tapes) p.a_letters.insert(p.a_letters.end(), t.letters.begin(), t.letters.end());
  for (std::size_t k = 0; k < m.rules.size(); ++k)
    for (std::size_t j = 0; j < p.copies; ++j) p.theta_letters.push_back(theta_name(m, theta_letter(k, j)));

  std::set<std::vector<Sym>> seen;
  auto add = [&](Word r) {
    if (seen.insert(min_rotation(r)).second) p.relators.push_back(std::move(r));
  };
  for (std::size_t k = 0; k < m.rules.size(); ++k) {
    const Rule& th = m.rules[k];
    for (const auto& part : th.parts) {
      PartShape sh = part_shape(m.hw, part.from);
      Word left = Word::letter(theta_letter(k, copy(sh.l)));
      Word right = Word::letter(theta_letter(k, copy(sh.r + 1)));
      add(part.from * right * invert(part.to) * invert(left));
    }
    for (std::size_t j = 1; j <= N; ++j)
      for (std::uint32_t s = 0; s < m.hw.tape_size(j); ++s) {
        if (!th.permit[j][s]) continue;
        Word t = Word::letter(theta_letter(k, j)), a = Word::letter(tape_letter(static_cast<std::uint32_t>(j), s));
        add(t * a * invert(t) * invert(a));
      }
  }
  if (hub) {
    if (L < 1) throw std::invalid_argument("hub exponent L must be at least 1");
    if (!is_standard_base(m, base_of(*hub))) throw std::invalid_argument("hub word does not have the standard base");
    p.hub = power(*hub, L);
  }
  return p;
}

// Closed-form relation count: sum over positive rules of parts + permitted letters, plus the hub.
inline std::size_t presentation_count_formula(const SMachine& m, bool hub) {
  std::size_t n = hub ? 1 : 0;
  for (const auto& r : m.rules) {
    n += r.parts.size();
    for (std::size_t j = 1; j <= m.N(); ++j) n += r.permitted_count(j);
  }
  return n;
}

inline json presentation_to_json(const SMachine& m, const Presentation& p) {
  json rel = json::array();
  for (const auto& r : p.relators) rel.push_back(format_relator(m, r));
  json j = {{"generators", {{"q", p.q_letters}, {"a", p.a_letters}, {"theta", p.theta_letters}}}, {"relators", rel}};
  if (p.hub) j["hub"] = format_relator(m, *p.hub);
  return j;
}

// ---- modified length ------------------------------------------------------------------

struct LengthScale {
  Rational delta;
  long long J = 1;

  LengthScale(Rational d, long long j = 1) : delta(std::move(d)), J(j) {
    if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0,1)");
    if (J < 1 || J * delta >= 1) throw std::invalid_argument("need J >= 1 and J*delta < 1");
  }
};

inline Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  }
}

inline Rational letter_cost(const Sym& s, const Rational& delta) {
  return s.letter.kind == Kind::Tape ? delta : Rational(1);
}

// Two letters with exactly one theta-letter and no q-letter.
inline bool is_syllable(const Sym& x, const Sym& y) {
  const int thetas = (x.letter.kind == Kind::Rule) + (y.letter.kind == Kind::Rule);
  return thetas == 1 && x.letter.kind != Kind::State && y.letter.kind != Kind::State;
}

// Smallest total cost of a factorization into letters (q: 1, a: delta,
// theta: 1) and two-letter (theta,a)-syllables (1).
inline Rational modified_length(const Word& w, const LengthScale& s) {
  std::vector<Rational> best(w.size() + 1);
  for (std::size_t i = 1; i <= w.size(); ++i) {
    best[i] = best[i - 1] + letter_cost(w[i - 1], s.delta);
    if (i >= 2 && is_syllable(w[i - 2], w[i - 1])) best[i] = std::min(best[i], Rational(best[i - 2] + 1));
  }
  return best[w.size()];
}

// Same minimum by trying every factorization; exponential, for testing the DP.
inline Rational modified_length_brute(const std::vector<Sym>& w, const LengthScale& s) {
  std::optional<Rational> best;
  std::function<void(std::size_t, Rational)> go = [&](std::size_t i, Rational acc) {
    if (i == w.size()) {
      if (!best || acc < *best) best = acc;
      return;
    }
    go(i + 1, acc + letter_cost(w[i], s.delta));
    if (i + 1 < w.size() && is_syllable(w[i], w[i + 1])) go(i + 2, acc + 1);
  };
  go(0, 0);
  return *best;
}

// Lower and upper bound for the number of cells of a theta-band with base
// length lb and la a-edges on its top.
inline std::pair<long long, long long> band_length_bounds(long long lb, long long la) {
  if (lb < 0 || la < 0) throw std::invalid_argument("band lengths must be non-negative");
  return {std::max(0LL, la - lb), la + 3 * lb};
}

// |s1|+|s2| >= |s| >= |s1|+|s2|-delta at every split point.
inline bool subword_additivity_check(const Word& w, const LengthScale& s) {
  const Rational whole = modified_length(w, s);
  for (std::size_t k = 0; k <= w.size(); ++k) {
    const Rational parts = modified_length(w.sub(0, k), s) + modified_length(w.sub(k, w.size()), s);
    if (parts < whole || whole < parts - s.delta) return false;
  }
  return true;
}

// Word from tokens without a machine: names starting with "theta" are
// theta-letters (also a leading greek theta), names starting with "q" are q-letters, the rest a-letters.
inline Word parse_mixed_word(const std::string& text, std::vector<std::string>* names = nullptr) {
  std::vector<std::string> local;
  auto& tab = names ? *names : local;
  Word w;
  for (const auto& tok : split_tokens(text)) {
    auto [n, sign] = split_sign(tok);
    const bool theta = n.rfind("theta", 0) == 0 || n.rfind("\u03b8", 0) == 0;
    Kind k = theta ? Kind::Rule : n.rfind("q", 0) == 0 ? Kind::State : Kind::Tape;
    auto it = std::find(tab.begin(), tab.end(), n);
    const auto id = static_cast<std::uint32_t>(it - tab.begin());
    if (it == tab.end()) tab.push_back(n);
    w.push({{k, 0, id}, sign});
  }
  return w;
}

}  // namespace smach
