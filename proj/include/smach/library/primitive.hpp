#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "smach/engine.hpp"

namespace smach {

enum class Direction { Left, Right };  // Left: Pr (p sweeps left first), Right: Pr*
enum class ComposeMode { Parallel, Sequential };

struct PrimitiveSpec {
  std::vector<std::string> alphabet;  // Y^1; the copy Y^2 gets primed names
  Direction direction = Direction::Left;
};

namespace detail {

inline std::string sfx(const std::string& base, std::size_t c, std::size_t n) {
  return n == 1 ? base : base + "_" + std::to_string(c + 1);
}

}  // namespace detail

// Chain Q^1 P_1 Q^2 ... P_n Q^{n+1} of primitive machines. Component c owns
// sectors 2c+1 (Q^{c+1}P) and 2c+2 (PQ^{c+2}). In Pr the original letters sit
// left of P at the start; in Pr* they sit right of P.
inline SMachine compose(const std::vector<PrimitiveSpec>& specs, ComposeMode mode) {
  using detail::sfx;
  const std::size_t n = specs.size();
  if (n == 0) throw std::invalid_argument("compose: no components");
  std::size_t width = 0;
  for (const auto& s : specs) {
    if (mode == ComposeMode::Parallel && !s.alphabet.empty() && width != 0 && s.alphabet.size() != width)
      throw std::invalid_argument("compose: parallel components need alphabets of equal size");
    width = std::max(width, s.alphabet.size());
  }
  if (width == 0) throw std::invalid_argument("compose: empty alphabet");

  SMachine m;
  m.name = n == 1 ? (specs[0].direction == Direction::Left ? "Pr" : "Pr*")
                  : (mode == ComposeMode::Parallel ? "parallel" : "sequential");
  const bool seq = mode == ComposeMode::Sequential && n > 1;
  for (std::size_t c = 0; c <= n; ++c) {
    m.hw.parts.push_back({"Q" + std::to_string(c + 1), {"q" + std::to_string(c + 1)}});
    if (c == n) break;
    Alphabet p{"P" + std::to_string(c + 1), {sfx("p1", c, n), sfx("p2", c, n)}};
    if (seq && c + 1 < n) p.letters.push_back(sfx("p3", c, n));
    m.hw.parts.push_back(p);
  }
  auto orig = [&](std::size_t c) {
    Alphabet a{"Y" + std::to_string(c + 1), {}};
    for (const auto& x : specs[c].alphabet) a.letters.push_back(sfx(x, c, n));
    return a;
  };
  auto copy = [&](std::size_t c) {
    Alphabet a{"Y" + std::to_string(c + 1) + "'", {}};
    for (const auto& x : specs[c].alphabet) a.letters.push_back(sfx(x + "'", c, n));
    return a;
  };
  for (std::size_t c = 0; c < n; ++c) {
    bool left = specs[c].direction == Direction::Left;
    m.hw.tapes.push_back(left ? orig(c) : copy(c));
    m.hw.tapes.push_back(left ? copy(c) : orig(c));
  }
  m.hw.index();

  auto q = [&](std::size_t i) { return "q" + std::to_string(i + 1); };
  auto pl = [&](std::size_t c, int k) { return sfx("p" + std::to_string(k), c, n); };
  auto x_of = [&](std::size_t c, std::size_t x) { return sfx(specs[c].alphabet[x], c, n); };
  auto xc_of = [&](std::size_t c, std::size_t x) { return sfx(specs[c].alphabet[x] + "'", c, n); };
  // sector where P_c sits at the start (and at the end) of its own run
  auto start_sector = [&](std::size_t c) { return specs[c].direction == Direction::Left ? 2 * c + 2 : 2 * c + 1; };

  // Parts of a rule. `active` components take `mid`; others take their idle/done part.
  struct Build {
    std::vector<std::pair<std::string, std::string>> parts;
    std::set<std::size_t> locks;
  };
  auto frame = [&](std::size_t active_lo, std::size_t active_hi) {
    // components before active_lo are done, after active_hi idle
    Build b;
    for (std::size_t c = 0; c < n; ++c) {
      b.parts.push_back({q(c), q(c)});
      if (c < active_lo) {
        b.parts.push_back({pl(c, 3), pl(c, 3)});
        b.locks.insert(start_sector(c));
      } else if (c > active_hi) {
        b.parts.push_back({pl(c, 1), pl(c, 1)});
        b.locks.insert(start_sector(c));
      } else {
        b.parts.push_back({"", ""});  // filled by caller
      }
    }
    b.parts.push_back({q(n), q(n)});
    return b;
  };
  auto emit = [&](const std::string& name, const Build& b) {
    Rule r = make_rule(m, name, b.parts, b.locks);
    m.rules.push_back(std::move(r));
  };

  auto groups = std::vector<std::pair<std::size_t, std::size_t>>{};
  if (seq)
    for (std::size_t c = 0; c < n; ++c) groups.push_back({c, c});
  else
    groups.push_back({0, n - 1});

  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto [lo, hi] = groups[g];
    const std::string tag = seq ? "_" + std::to_string(lo + 1) : "";
    std::size_t gw = 0;
    for (std::size_t c = lo; c <= hi; ++c) gw = std::max(gw, specs[c].alphabet.size());
    for (int phase : {1, 2}) {
      for (std::size_t x = 0; x < gw; ++x) {
        Build b = frame(lo, hi);
        std::string label;
        for (std::size_t c = lo; c <= hi; ++c) {
          auto& part = b.parts[2 * c + 1];
          std::string p = pl(c, phase);
          if (specs[c].alphabet.empty()) {
            part = {p, p};
            continue;
          }
          if (label.empty()) label = x_of(c, x);
          bool left = specs[c].direction == Direction::Left;
          std::string a = x_of(c, x), ac = xc_of(c, x);
          // Pr: p1 -> a^-1 p1 a', p2 -> a p2 a'^-1.  Pr*: p1 -> a' p1 a^-1, p2 -> a'^-1 p2 a.
          if (left)
            part = {p, phase == 1 ? a + "^-1 " + p + " " + ac : a + " " + p + " " + ac + "^-1"};
          else
            part = {p, phase == 1 ? ac + " " + p + " " + a + "^-1" : ac + "^-1 " + p + " " + a};
        }
        if (label.empty()) continue;
        emit("z" + std::to_string(phase) + "(" + label + ")", b);
      }
      if (phase == 1) {
        Build b = frame(lo, hi);
        for (std::size_t c = lo; c <= hi; ++c) {
          b.parts[2 * c + 1] = {pl(c, 1), pl(c, 2)};
          // p met its Q-neighbour: the sector it swept is now empty
          b.locks.insert(specs[c].direction == Direction::Left ? 2 * c + 1 : 2 * c + 2);
        }
        emit("z12" + tag, b);
      }
    }
    if (seq && g + 1 < groups.size()) {
      Build b = frame(lo, hi);
      b.parts[2 * lo + 1] = {pl(lo, 2), pl(lo, 3)};
      b.locks.insert(start_sector(lo));
      // the next component is still idle at this point
      b.locks.insert(start_sector(lo + 1));
      emit("z21" + tag, b);
    }
  }

  std::string in;
  for (std::size_t c = 0; c < n; ++c) in += q(c) + " " + pl(c, 1) + " ";
  in += q(n);
  m.input = parse_word(m.hw, in);
  for (std::size_t c = 0; c < n; ++c)
    m.input_sectors.push_back(specs[c].direction == Direction::Left ? 2 * c + 1 : 2 * c + 2);
  m.finalize();
  return m;
}

inline SMachine make_primitive(const PrimitiveSpec& spec) { return compose({spec}, ComposeMode::Parallel); }

inline PrimitiveSpec letters_spec(std::size_t r, Direction d = Direction::Left) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  PrimitiveSpec s;
  s.direction = d;
  for (std::size_t i = 0; i < r; ++i) s.alphabet.push_back(i < 8 ? names[i] : "x" + std::to_string(i));
  return s;
}

// History of the canonical computation of a single-component Pr/Pr* (or a
// parallel composition, whose copies hold copies of u) on input word u.
inline Word primitive_canonical_history(const SMachine& m, const Word& u, Direction d, const std::string& tag = "") {
  auto letter_rule = [&](int phase, const Sym& s) -> Sym {
    std::string nm = "z" + std::to_string(phase) + "(" + m.hw.name(s.letter) + ")";
    auto k = m.rule_index(nm);
    if (!k) throw std::invalid_argument("no rule " + nm);
    return {rule_letter(static_cast<std::uint32_t>(*k)), s.sign};
  };
  Word h;
  std::vector<Sym> us(u.begin(), u.end());
  if (d == Direction::Left) {
    for (auto it = us.rbegin(); it != us.rend(); ++it) h.push(letter_rule(1, *it));
    h.append(parse_history(m, "z12" + tag));
    for (const auto& s : us) h.push(letter_rule(2, s));
  } else {
    for (const auto& s : us) h.push(letter_rule(1, s));
    h.append(parse_history(m, "z12" + tag));
    for (auto it = us.rbegin(); it != us.rend(); ++it) h.push(letter_rule(2, *it));
  }
  return h;
}

}  // namespace smach
