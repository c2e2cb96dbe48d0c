#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "smach/engine.hpp"
#include "smach/fast.hpp"
#include "smach/io.hpp"
#include "smach/library/division.hpp"
#include "smach/library/primitive.hpp"
#include "smach/necklace.hpp"
#include "smach/transforms/common.hpp"
#include "smach/transforms/historical.hpp"

namespace smach {

using Rng = std::mt19937_64;

// rng() % n rather than std::uniform_int_distribution: the latter differs
// between standard libraries and seeds must reproduce everywhere.
inline std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
inline bool coin(Rng& rng, double p) { return static_cast<double>(rng() % 1000000) < p * 1e6; }

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ull + trial + 0x632be59bd9b4e019ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// ---- reports ------------------------------------------------------------------

struct CheckReport {
  static constexpr std::size_t kMaxWitnesses = 5;

  std::string id;
  std::size_t trials = 0;
  std::size_t failure_count = 0;
  std::vector<json> failures;  // first kMaxWitnesses witnesses
  json params = json::object();
  json stats = json::object();

  bool ok() const { return failure_count == 0; }

  void fail(json witness) {
    ++failure_count;
    if (failures.size() < kMaxWitnesses) failures.push_back(std::move(witness));
  }

  void merge(const CheckReport& o) {
    trials += o.trials;
    failure_count += o.failure_count;
    for (const auto& f : o.failures)
      if (failures.size() < kMaxWitnesses) failures.push_back(f);
    for (auto it = o.stats.begin(); it != o.stats.end(); ++it) {
      if (!stats.contains(it.key()))
        stats[it.key()] = it.value();
      else if (it.value().is_number_unsigned())
        stats[it.key()] = stats[it.key()].get<std::uint64_t>() + it.value().get<std::uint64_t>();
    }
  }

  void count(const std::string& key, std::uint64_t n = 1) {
    stats[key] = (stats.contains(key) ? stats[key].get<std::uint64_t>() : 0) + n;
  }

  json to_json() const {
    return {{"lemma", id}, {"pass", ok()}, {"trials", trials}, {"failure_count", failure_count},
            {"failures", failures}, {"params", params}, {"stats", stats}};
  }
};

// Replayable witness: the machine, the start word and the history.
inline json witness(const SMachine& m, const Word& start, const Word& history, const std::string& violation) {
  return {{"violation", violation}, {"machine", machine_to_json(m)}, {"start", format_word(m, start)},
          {"history", format_word(m, history)}};
}
inline json witness(const SMachine& m, const Computation& c, const std::string& violation) {
  return witness(m, c.start, c.history, violation);
}

struct CheckParams {
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::optional<std::size_t> max_len;  // each check has its own default
  unsigned jobs = 1;
  double shrink_bias = 0.3;

  std::size_t len_or(std::size_t d) const { return max_len.value_or(d); }
  json to_json() const {
    json j = {{"trials", trials}, {"seed", seed}, {"jobs", jobs}, {"shrink_bias", shrink_bias}};
    if (max_len) j["max_len"] = *max_len;
    return j;
  }
};

// Runs body(rng, report) once per trial. Trial i always gets the same seed, so
// the outcome does not depend on the number of jobs.
template <class F>
CheckReport run_trials(const std::string& id, const CheckParams& p, F body) {
  const unsigned jobs = std::max(1u, p.jobs);
  std::vector<CheckReport> parts(jobs);
  auto work = [&](unsigned j) {
    for (std::size_t i = j; i < p.trials; i += jobs) {
      Rng rng(trial_seed(p.seed, i));
      body(rng, parts[j]);
      ++parts[j].trials;
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& t : pool) t.join();
  }
  CheckReport r;
  r.id = id;
  r.params = p.to_json();
  for (const auto& part : parts) r.merge(part);
  return r;
}

// ---- random words and computations ----------------------------------------------

inline Word random_reduced(const std::vector<Letter>& letters, std::size_t len, Rng& rng) {
  Word w;
  if (letters.empty()) return w;
  while (w.size() < len) w.push({letters[pick(rng, letters.size())], coin(rng, 0.5) ? 1 : -1});
  return w;
}

// All reduced words of length <= max_len over the letters.
inline std::vector<Word> all_reduced_words(const std::vector<Letter>& letters, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t from = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (const auto& l : letters)
        for (int s : {1, -1}) {
          Sym x{l, s};
          if (!out[i].empty() && out[i].back().inverse_of(x)) continue;
          Word w = out[i];
          w.push(x);
          out.push_back(std::move(w));
        }
    from = to;
  }
  return out;
}

inline std::vector<Letter> tape_letters(const Hardware& hw, std::size_t j) {
  std::vector<Letter> out;
  for (std::uint32_t s = 0; s < hw.tape_size(j); ++s) out.push_back(tape_letter(static_cast<std::uint32_t>(j), s));
  return out;
}

// Random admissible base of the given length (random walk over base letters).
inline Base random_base(const Hardware& hw, std::size_t len, Rng& rng) {
  const std::uint32_t N = static_cast<std::uint32_t>(hw.N());
  Base b{{static_cast<std::uint32_t>(pick(rng, N + 1)), coin(rng, 0.5) ? 1 : -1}};
  while (b.size() < len) {
    const BaseLetter x = b.back();
    std::vector<BaseLetter> next;
    for (BaseLetter y : {BaseLetter{x.part + 1, 1}, BaseLetter{x.part, -x.sign}, BaseLetter{x.part - 1, -1}})
      if (y.part <= N && sector_alphabet(hw, x, y) != 0) next.push_back(y);
    if (next.empty()) return random_base(hw, len, rng);  // dead end: start over
    b.push_back(next[pick(rng, next.size())]);
  }
  return b;
}

// Random admissible word with the given base to which some rule applies: the
// state letters come from the left side of a random rule letter and the tape
// letters from its permitted sets.
inline std::optional<Word> random_start_word(const SMachine& m, const Base& base, std::size_t max_content, Rng& rng,
                                             int attempts = 64) {
  const auto letters = m.rule_letters();
  for (int a = 0; a < attempts; ++a) {
    const Sym th = letters[pick(rng, letters.size())];
    const Rule& r = m.rule(th);
    std::vector<Letter> state(m.N() + 1);
    for (const auto& p : r.parts)
      for (const auto& l : state_letters(th.sign > 0 ? p.from : p.to)) state[l.alphabet] = l;
    Word w;
    bool ok = true;
    for (std::size_t k = 0; k < base.size() && ok; ++k) {
      if (k > 0) {
        const std::uint32_t alph = sector_alphabet(m.hw, base[k - 1], base[k]);
        if (alph == 0) return std::nullopt;
        std::vector<Letter> allowed;
        for (const auto& l : tape_letters(m.hw, alph))
          if (r.permit[alph][l.symbol]) allowed.push_back(l);
        std::size_t len = pick(rng, max_content + 1);
        if (base[k - 1].part == base[k].part) {
          if (allowed.empty()) ok = false;  // q u q^-1 needs u != 1
          len = std::max<std::size_t>(len, 1);
        }
        Word u = random_reduced(allowed, len, rng);
        w.append(u);
      }
      w.push({state[base[k].part], base[k].sign});
    }
    if (!ok || w.size() < base.size() || base_of(w) != base) continue;
    if (applicable(m, th, w)) return w;
  }
  return std::nullopt;
}

// Random reduced computation of up to `len` steps. Never undoes the previous
// rule; with probability `shrink_bias` a step is drawn among the applicable
// rules that shorten the word (when there are any).
inline Computation fuzz_from(const SMachine& m, const Word& w0, std::size_t len, Rng& rng, double shrink_bias = 0.3) {
  Computation c;
  c.start = w0;
  c.trace.push_back(w0);
  const auto letters = m.rule_letters();
  for (std::size_t step = 0; step < len; ++step) {
    std::vector<std::pair<Sym, Word>> all, shrink;
    const std::size_t cur = a_length(c.trace.back());
    for (const auto& th : letters) {
      if (!c.history.empty() && th.inverse_of(c.history.back())) continue;
      auto r = apply_rule(m, th, c.trace.back());
      if (!r.word) continue;
      if (a_length(*r.word) < cur) shrink.push_back({th, *r.word});
      all.push_back({th, std::move(*r.word)});
    }
    if (all.empty()) break;
    auto& pool = !shrink.empty() && coin(rng, shrink_bias) ? shrink : all;
    auto& [th, w] = pool[pick(rng, pool.size())];
    c.history.push(th);
    c.trace.push_back(std::move(w));
  }
  return c;
}

// Deterministic per seed. Throws if no start word with the base is found.
inline Computation fuzz_reduced_computation(const SMachine& m, const Base& base, std::size_t len, std::uint64_t seed,
                                            double shrink_bias = 0.3) {
  Rng rng(seed);
  auto w0 = random_start_word(m, base, 4, rng);
  if (!w0) throw std::runtime_error("fuzz: no applicable start word with this base");
  return fuzz_from(m, *w0, len, rng, shrink_bias);
}

// ---- toy machines -----------------------------------------------------------------

enum class Side { Left, Right };

// One sector; rule th<j> multiplies the tape word by x<j> on the given side.
inline SMachine gen_machine(std::size_t r, Side side) {
  SMachine m;
  m.name = side == Side::Left ? "gen-left" : "gen-right";
  m.hw.parts = {{"Q0", {"q0"}}, {"Q1", {"q1"}}};
  m.hw.tapes = {{"X", {}}};
  for (std::size_t j = 1; j <= r; ++j) m.hw.tapes[0].letters.push_back("x" + std::to_string(j));
  m.hw.index();
  for (std::size_t j = 1; j <= r; ++j) {
    std::string x = "x" + std::to_string(j);
    if (side == Side::Left)
      m.rules.push_back(make_rule(m, "th" + std::to_string(j), {{"q0", "q0 " + x}, {"q1", "q1"}}));
    else
      m.rules.push_back(make_rule(m, "th" + std::to_string(j), {{"q0", "q0"}, {"q1", x + " q1"}}));
  }
  m.finalize();
  return m;
}

// One sector; rule th<j> multiplies by a<j> on the left and b<j> on the right.
// The tape alphabet also has a letter x that no rule writes.
inline SMachine gen1_machine(std::size_t r) {
  SMachine m;
  m.name = "gen1";
  m.hw.parts = {{"Q0", {"q0"}}, {"Q1", {"q1"}}};
  m.hw.tapes = {{"Y", {}}};
  for (const char* c : {"a", "b"})
    for (std::size_t j = 1; j <= r; ++j) m.hw.tapes[0].letters.push_back(c + std::to_string(j));
  m.hw.tapes[0].letters.push_back("x");
  m.hw.index();
  for (std::size_t j = 1; j <= r; ++j) {
    std::string n = std::to_string(j);
    m.rules.push_back(make_rule(m, "th" + n, {{"q0", "q0 a" + n}, {"q1", "b" + n + " q1"}}));
  }
  m.finalize();
  return m;
}

// Parts Q0 Q1 Q2; rule th<j> has the part q1 -> a<j> q1 b<j>. With base
// Q1 Q1^-1 it conjugates the tape word by b<j>.
inline SMachine gen2_machine(std::size_t r) {
  SMachine m;
  m.name = "gen2";
  m.hw.parts = {{"Q0", {"q0"}}, {"Q1", {"q1"}}, {"Q2", {"q2"}}};
  m.hw.tapes = {{"A", {}}, {"B", {}}};
  for (std::size_t j = 1; j <= r; ++j) {
    m.hw.tapes[0].letters.push_back("a" + std::to_string(j));
    m.hw.tapes[1].letters.push_back("b" + std::to_string(j));
  }
  m.hw.tapes[1].letters.push_back("x");
  m.hw.index();
  for (std::size_t j = 1; j <= r; ++j) {
    std::string n = std::to_string(j);
    m.rules.push_back(make_rule(m, "th" + n, {{"q0", "q0"}, {"q1", "a" + n + " q1 b" + n}, {"q2", "q2"}}));
  }
  m.finalize();
  return m;
}

// Random machine with one-letter parts moving at most one tape letter per side.
inline SMachine random_normalized_machine(Rng& rng, std::size_t N = 2, std::size_t rules = 4) {
  SMachine m;
  m.name = "random";
  for (std::size_t i = 0; i <= N; ++i) {
    Alphabet a{"Q" + std::to_string(i), {}};
    const std::size_t k = 1 + pick(rng, 2);
    for (std::size_t s = 0; s < k; ++s) a.letters.push_back("q" + std::to_string(i) + "_" + std::to_string(s));
    m.hw.parts.push_back(a);
  }
  for (std::size_t j = 1; j <= N; ++j) {
    Alphabet a{"Y" + std::to_string(j), {}};
    const std::size_t k = 1 + pick(rng, 2);
    for (std::size_t s = 0; s < k; ++s) a.letters.push_back("y" + std::to_string(j) + "_" + std::to_string(s));
    m.hw.tapes.push_back(a);
  }
  m.hw.index();
  while (m.rules.size() < rules) {
    Rule r;
    r.name = "r" + std::to_string(m.rules.size());
    r.permit = m.full_permit();
    std::vector<bool> locked(N + 1, false);
    for (std::size_t j = 1; j <= N; ++j) {
      locked[j] = coin(rng, 0.2);
      for (auto& c : r.permit[j]) c = locked[j] ? 0 : (coin(rng, 0.8) ? 1 : 0);
      if (!locked[j]) r.permit[j][pick(rng, r.permit[j].size())] = 1;
    }
    auto letter = [&](std::size_t j) -> Word {
      if (j < 1 || j > N || locked[j]) return {};
      return Word{{tape_letter(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(pick(rng, m.hw.tape_size(j)))),
                   coin(rng, 0.5) ? 1 : -1}};
    };
    bool changes = false;
    for (std::size_t i = 0; i <= N; ++i) {
      const auto& ls = m.hw.parts[i].letters;
      Word q = Word::letter(state_letter(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(pick(rng, ls.size()))));
      Word q2 = Word::letter(state_letter(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(pick(rng, ls.size()))));
      Word v, v2, u, u2;
      switch (pick(rng, 3)) {
        case 1: v = letter(i); break;
        case 2: v2 = letter(i); break;
        default: break;
      }
      switch (pick(rng, 3)) {
        case 1: u = letter(i + 1); break;
        case 2: u2 = letter(i + 1); break;
        default: break;
      }
      RulePart p{v * q * u, v2 * q2 * u2};
      changes = changes || !(p.from == p.to);
      r.parts.push_back(p);
    }
    if (changes) m.rules.push_back(std::move(r));
  }
  m.finalize();
  return m;
}

// ---- per-computation verifiers (Lemmas on one sector) ---------------------------

inline Word sector_content(const Word& w) {
  auto s = sectors_of(w);
  if (s.size() != 1) throw std::invalid_argument("expected a word with a one-sector base");
  return s[0];
}

// The rule -> letter bijection of a gen machine, checked against the rule shape.
inline std::vector<Letter> gen_bijection(const SMachine& m, Side side) {
  if (m.N() != 1) throw std::invalid_argument("gen: machine must have a one-sector base");
  std::vector<Letter> out;
  std::set<Letter> seen;
  for (const auto& r : m.rules) {
    const RulePart& moving = r.parts[side == Side::Left ? 0 : 1];
    const RulePart& still = r.parts[side == Side::Left ? 1 : 0];
    auto a = simple_side(moving.from), b = simple_side(moving.to);
    const Word& extra = side == Side::Left ? b->u : b->v;
    bool shape = a && b && a->u.empty() && a->v.empty() && (side == Side::Left ? b->v.empty() : b->u.empty()) &&
                 extra.size() == 1 && extra[0].sign == 1 && still.from == still.to && a->q == b->q;
    if (!shape || !seen.insert(extra[0].letter).second)
      throw std::invalid_argument("gen: rule " + r.name + " does not multiply by its own letter on one side");
    out.push_back(extra[0].letter);
  }
  return out;
}

// Lemma on one-sided multiplication: (a) the history is a copy of the reduced
// u'u^-1 read right to left (left multiplication) or of u^-1 u' read left to
// right (right multiplication); (b) ||H|| <= ||u||+||u'||; (c) every
// intermediate tape word is no longer than max(||u||,||u'||).
inline std::optional<std::string> verify_gen(const Computation& c, Side side, const std::vector<Letter>& letter_of_rule) {
  const Word u = sector_content(c.start), u2 = sector_content(c.end());
  Word copy;
  for (const auto& s : c.history) copy.push({letter_of_rule.at(s.letter.symbol), s.sign});
  if (side == Side::Left) {
    Word expect = u2 * invert(u);
    Word reversed(std::vector<Sym>(expect.syms().rbegin(), expect.syms().rend()));
    if (copy != reversed) return "(a) history is not a copy of u'u^-1 read right to left";
  } else if (copy != invert(u) * u2) {
    return "(a) history is not a copy of u^-1 u'";
  }
  if (c.history.size() > u.size() + u2.size()) return "(b) ||H|| > ||u||+||u'||";
  const std::size_t bound = std::max(u.size(), u2.size());
  for (const auto& w : c.trace)
    if (sector_content(w).size() > bound) return "(c) intermediate word longer than max(||u||,||u'||)";
  return std::nullopt;
}

// Two-sided multiplication by letters of disjoint alphabets:
// ||W_j|| <= max(||W_0||,||W_t||) and 2||H|| <= ||u||+||u'||.
inline std::optional<std::string> verify_gen1(const Computation& c) {
  const std::size_t a0 = a_length(c.start), at = a_length(c.end());
  for (const auto& w : c.trace)
    if (a_length(w) > std::max(a0, at)) return "intermediate word longer than both ends";
  if (2 * c.history.size() > a0 + at) return "2||H|| > ||u||+||u'||";
  return std::nullopt;
}

struct Factorization {
  std::size_t h1 = 0, h2 = 0, k = 0, h3 = 0;
};

// All ways to write H = H1 H2^k H3 graphically (k >= 0; with k = 0 the middle is
// empty and h2 is reported as 0). `accept` filters; the first accepted one is returned.
inline std::optional<Factorization> find_factorization(const Word& h,
                                                       const std::function<bool(const Factorization&)>& accept) {
  const std::size_t t = h.size();
  for (std::size_t h1 = 0; h1 <= t; ++h1)
    for (std::size_t h3 = 0; h1 + h3 <= t; ++h3) {
      const std::size_t mid = t - h1 - h3;
      if (mid == 0) {
        Factorization f{h1, 0, 0, h3};
        if (accept(f)) return f;
        continue;
      }
      for (std::size_t p = 1; p <= mid; ++p) {
        if (mid % p) continue;
        bool periodic = true;
        for (std::size_t i = h1 + p; i < h1 + mid && periodic; ++i) periodic = h[i] == h[i - p];
        if (!periodic) continue;
        Factorization f{h1, p, mid / p, h3};
        if (accept(f)) return f;
      }
    }
  return std::nullopt;
}

// Conjugation lemma for base Q_i Q_i^-1: H = H1 H2^k H3 with ||H2|| <= min,
// ||H1|| <= ||u||/2, ||H3|| <= ||u'||/2; plus |W_i|_a <= max(||u||,||u'||).
struct Gen2Result {
  std::optional<Factorization> factorization;
  bool length_ok = true;
};

inline Gen2Result verify_gen2(const Computation& c) {
  Gen2Result res;
  const std::size_t u = a_length(c.start), u2 = a_length(c.end());
  res.factorization = find_factorization(c.history, [&](const Factorization& f) {
    return f.h2 <= std::min(u, u2) && 2 * f.h1 <= u && 2 * f.h3 <= u2;
  });
  for (const auto& w : c.trace) res.length_ok = res.length_ok && a_length(w) <= std::max(u, u2);
  return res;
}

inline void check_gen2_shape(const SMachine& m) {
  std::set<Letter> seen;
  for (const auto& r : m.rules)
    for (const auto& p : r.parts) {
      auto a = simple_side(p.from), b = simple_side(p.to);
      if (!a || !b) throw std::invalid_argument("gen2: rule " + r.name + " has a multi-letter part");
      if (a->q.alphabet != 1) continue;
      if (!a->v.empty() || !a->u.empty() || b->u.size() != 1 || b->v.size() > 1 || !seen.insert(b->u[0].letter).second)
        throw std::invalid_argument("gen2: rule " + r.name + " is not q -> a q b with its own letter b");
    }
}

// ---- fuzz drivers for the one-sector lemmas ------------------------------------------

inline CheckReport check_gen(const SMachine& m, const Computation& c, Side side) {
  CheckReport r;
  r.id = "gen";
  r.trials = 1;
  if (auto v = verify_gen(c, side, gen_bijection(m, side))) r.fail(witness(m, c, *v));
  return r;
}

inline CheckReport check_gen1(const SMachine& m, const Computation& c) {
  CheckReport r;
  r.id = "gen1";
  r.trials = 1;
  if (auto v = verify_gen1(c)) r.fail(witness(m, c, *v));
  return r;
}

inline CheckReport check_gen2(const SMachine& m, const Computation& c) {
  check_gen2_shape(m);
  CheckReport r;
  r.id = "gen2";
  r.trials = 1;
  auto g = verify_gen2(c);
  if (!g.factorization) r.fail(witness(m, c, "no factorization H1 H2^k H3 within the bounds"));
  if (!g.length_ok) r.fail(witness(m, c, "|W_i|_a > max(||u||,||u'||)"));
  if (g.factorization)
    r.stats["factorization"] = {{"h1", g.factorization->h1}, {"h2", g.factorization->h2},
                                {"k", g.factorization->k}, {"h3", g.factorization->h3}};
  return r;
}

inline CheckReport fuzz_gen(const CheckParams& p) {
  const SMachine left = gen_machine(3, Side::Left), right = gen_machine(3, Side::Right);
  const auto bl = gen_bijection(left, Side::Left), br = gen_bijection(right, Side::Right);
  const std::size_t L = p.len_or(16);
  return run_trials("gen", p, [&](Rng& rng, CheckReport& rep) {
    const bool l = coin(rng, 0.5);
    const SMachine& m = l ? left : right;
    Word u = random_reduced(tape_letters(m.hw, 1), pick(rng, 7), rng);
    Word w0 = standard_word(state_letters(parse_word(m, "q0 q1")), {u});
    auto c = fuzz_from(m, w0, pick(rng, L + 1), rng, p.shrink_bias);
    if (c.length() > 0) rep.count("nontrivial");
    if (auto v = verify_gen(c, l ? Side::Left : Side::Right, l ? bl : br)) rep.fail(witness(m, c, *v));
  });
}

inline CheckReport fuzz_gen1(const CheckParams& p) {
  const SMachine m = gen1_machine(3);
  const std::size_t L = p.len_or(16);
  return run_trials("gen1", p, [&](Rng& rng, CheckReport& rep) {
    Word u = random_reduced(tape_letters(m.hw, 1), pick(rng, 9), rng);
    Word w0 = standard_word(state_letters(parse_word(m, "q0 q1")), {u});
    Computation c;
    if (coin(rng, 0.3)) {
      // periodic history th_j^k, the case with the most cancellation
      Sym th{rule_letter(static_cast<std::uint32_t>(pick(rng, m.rules.size()))), coin(rng, 0.5) ? 1 : -1};
      c = run_checked(m, w0, power(Word{th}, static_cast<long long>(pick(rng, L + 1))));
    } else {
      c = fuzz_from(m, w0, pick(rng, L + 1), rng, p.shrink_bias);
    }
    if (auto v = verify_gen1(c)) rep.fail(witness(m, c, *v));
  });
}

// Both gen2 (factorization) and gen3 (a-length bound) on conjugation computations.
inline CheckReport fuzz_gen2(const CheckParams& p, const std::string& id = "gen2") {
  const SMachine m = gen2_machine(3);
  const std::size_t L = p.len_or(16);
  const Word q = parse_word(m, "q1");
  return run_trials(id, p, [&](Rng& rng, CheckReport& rep) {
    Word u = random_reduced(tape_letters(m.hw, 2), 1 + pick(rng, 8), rng);
    Word w0 = q * u * invert(q);
    Computation c;
    if (coin(rng, 0.3)) {
      // H1 H2^k H3 built on purpose
      auto letters = m.rule_letters();
      auto rnd = [&](std::size_t n) {
        Word h;
        while (h.size() < n) h.push(letters[pick(rng, letters.size())]);
        return h;
      };
      Word h = rnd(pick(rng, 3)) * power(rnd(1 + pick(rng, 3)), static_cast<long long>(pick(rng, 5))) * rnd(pick(rng, 3));
      c = run_checked(m, w0, h);
    } else {
      c = fuzz_from(m, w0, pick(rng, L + 1), rng, p.shrink_bias);
    }
    auto g = verify_gen2(c);
    if (id == "gen2" && !g.factorization) rep.fail(witness(m, c, "no factorization H1 H2^k H3 within the bounds"));
    if (!g.length_ok) rep.fail(witness(m, c, "|W_i|_a > max(||u||,||u'||)"));
    if (g.factorization) rep.count("witness_found");
  });
}

// ---- primitive machine -------------------------------------------------------------

// Letter symmetries of Pr over {a,b}: a permutation of the two letters and a
// sign per letter, applied to both tape copies. Each one maps reduced
// computations to reduced computations and keeps a-lengths and the shapes
// q1 u p q2, so checking one start word per orbit covers the whole orbit.
struct PrimSymmetry {
  std::array<std::uint32_t, 2> perm;
  std::array<int, 2> sign;

  Word apply(const Word& w) const {
    Word out;
    for (const auto& s : w) out.push({tape_letter(s.letter.alphabet, perm[s.letter.symbol]), s.sign * sign[s.letter.symbol]});
    return out;
  }
};

inline std::vector<PrimSymmetry> prim_symmetries() {
  std::vector<PrimSymmetry> out;
  for (auto perm : {std::array<std::uint32_t, 2>{0, 1}, std::array<std::uint32_t, 2>{1, 0}})
    for (int s0 : {1, -1})
      for (int s1 : {1, -1}) out.push_back({perm, {s0, s1}});
  return out;
}

// Image of a history under a symmetry: z1(a)^e -> z1(perm a)^(e * sign a).
inline Word prim_history_image(const SMachine& m, const PrimSymmetry& g, const Word& h) {
  const std::string names[] = {"a", "b"};
  Word out;
  for (const auto& s : h) {
    const std::string& n = m.rules[s.letter.symbol].name;
    if (n.size() != 5 || n[2] != '(') {
      out.push(s);
      continue;
    }
    const std::uint32_t x = n[3] == 'a' ? 0 : 1;
    const std::string img = n.substr(0, 3) + names[g.perm[x]] + ")";
    out.push({rule_letter(static_cast<std::uint32_t>(*m.rule_index(img))), s.sign * g.sign[x]});
  }
  return out;
}

// Exhaustive check of the primitive-machine lemma on Pr over {a,b}: every start
// word q1 u p v q2 (p in {p1,p2}, ||u||+||v|| <= max_word) and every reduced
// history of length <= max_t. Clauses:
//  (1) once the a-length grows at an inner step it keeps growing;
//  (2) |W_i|_a <= max(|W_0|_a, |W_t|_a);
//  (3) q1 u p1 q2 -> q1 v p2 q2 forces u = v, constant length, t = 2k+1,
//      p1 at q1 in W_k and p2 at q1 in W_{k+1}; the history is unique for the
//      start word and determines u;
//  (4) no computation q1 u p1 q2 -> q1 v p1 q2 or q1 u p2 q2 -> q1 v p2 q2;
//  (5) from q1 u p q2 or q1 p u q2 the a-length never drops below |W_0|_a.
// The search runs from one start word per symmetry orbit; the clause (3)
// histories are then mapped to every word of the orbit.
inline CheckReport check_prim_exhaustive(std::size_t max_word = 4, std::size_t max_t = 12) {
  const SMachine m = make_primitive(letters_spec(2));
  CheckReport rep;
  rep.id = "prim";
  rep.params = {{"alphabet", 2}, {"max_word", max_word}, {"max_t", max_t}};
  FastRunner run(m);
  const auto rule_letters = m.rule_letters();
  const auto group = prim_symmetries();
  const Letter q1 = m.hw.at("q1"), q2 = m.hw.at("q2"), p1 = m.hw.at("p1"), p2 = m.hw.at("p2");
  const std::size_t n_letters = run.letter_count();

  std::vector<std::size_t> len(max_t + 1), pmax(max_t + 1), pmin(max_t + 1), sec1(max_t + 1);
  std::vector<Letter> pstate(max_t + 1);
  std::vector<std::uint32_t> path(max_t);
  std::uint64_t nodes = 0, starts = 0;
  std::map<Word, Word> history_owner;  // clause (3): H -> u

  const auto us = all_reduced_words(tape_letters(m.hw, 1), max_word);
  const auto vs = all_reduced_words(tape_letters(m.hw, 2), max_word);
  for (const Letter p : {p1, p2})
    for (const auto& u : us)
      for (const auto& v : vs) {
        if (u.size() + v.size() > max_word) continue;
        ++starts;
        bool representative = true;
        for (const auto& g : group) {
          auto img = std::make_pair(g.apply(u), g.apply(v));
          if (img < std::make_pair(u, v)) representative = false;
        }
        if (!representative) continue;

        const Word w0 = standard_word({q1, p, q2}, {u, v});
        run.load(w0);
        const bool left_form = v.empty(), right_form = u.empty();  // q1 u p q2 / q1 p u q2
        const std::size_t k = u.size();
        std::size_t hits3 = 0;
        Word found3;
        auto history_word = [&](std::size_t t) {
          Word h;
          for (std::size_t i = 0; i < t; ++i) h.push(rule_letters[path[i]]);
          return h;
        };
        auto fail = [&](std::size_t t, const std::string& what) { rep.fail(witness(m, w0, history_word(t), what)); };
        len[0] = pmax[0] = pmin[0] = w0.size() - 3;
        sec1[0] = u.size();
        pstate[0] = p;

        auto dfs = [&](auto& self, std::size_t t) -> void {
          ++nodes;
          if (t >= 1) {
            if (t >= 2 && len[t - 1] > len[t - 2] && len[t] <= len[t - 1]) fail(t, "(1) growth stopped");
            if (pmax[t] > std::max(len[0], len[t])) fail(t, "(2) inner word longer than both ends");
            const bool end_left = run.sector_size(2) == 0;
            if (left_form && p == p1 && end_left && pstate[t] == p2) {
              ++hits3;
              found3 = history_word(t);
              if (!(run.sector(1) == u)) fail(t, "(3) u != v");
              if (pmax[t] != len[0] || pmin[t] != len[0]) fail(t, "(3) length not constant");
              if (t != 2 * k + 1) fail(t, "(3) t != 2k+1");
              else if (!(pstate[k] == p1 && sec1[k] == 0 && pstate[k + 1] == p2 && sec1[k + 1] == 0))
                fail(t, "(3) p does not meet q1 at W_k, W_k+1");
            }
            if (left_form && end_left && pstate[t] == p) fail(t, "(4) returned to the same p-letter");
            if ((left_form || right_form) && len[t] < len[0]) fail(t, "(5) a-length dropped below |W_0|_a");
          }
          if (t == max_t) return;
          for (std::size_t i = 0; i < n_letters; ++i) {
            if (t > 0 && (path[t - 1] ^ 1u) == i) continue;
            if (!run.apply(i)) continue;
            path[t] = static_cast<std::uint32_t>(i);
            len[t + 1] = run.a_length();
            pmax[t + 1] = std::max(pmax[t], len[t + 1]);
            pmin[t + 1] = std::min(pmin[t], len[t + 1]);
            sec1[t + 1] = run.sector_size(1);
            pstate[t + 1] = run.states()[1];
            self(self, t + 1);
            run.undo();
          }
        };
        dfs(dfs, 0);
        ++rep.trials;
        if (left_form && p == p1 && 2 * k + 1 <= max_t) {
          if (hits3 != 1) {
            rep.fail(witness(m, w0, {}, "(3) expected exactly one computation to q1 v p2 q2, found " + std::to_string(hits3)));
            continue;
          }
          for (const auto& g : group) {
            auto [it, fresh] = history_owner.emplace(prim_history_image(m, g, found3), g.apply(u));
            if (!fresh && !(it->second == g.apply(u))) rep.fail(witness(m, w0, found3, "(3) history does not determine u"));
          }
        }
      }
  rep.count("computations", nodes);
  rep.count("start_words", starts);
  rep.count("orbit_representatives", rep.trials);
  rep.count("clause3_histories", history_owner.size());
  return rep;
}

// Fuzzed form of the primitive-machine lemma on Pr over {a,b,c}: random start
// words q1 u p v q2 with ||u||+||v|| <= max_len and random reduced computations
// of up to 3*max_len+3 steps, checking clauses (1), (2), (4), (5). Clause (3)
// is checked on the canonical computation from q1 u p1 q2.
inline CheckReport fuzz_prim2(const CheckParams& p) {
  const SMachine m = make_primitive(letters_spec(3));
  const std::size_t max_len = p.len_or(8);
  const Letter q1 = m.hw.at("q1"), q2 = m.hw.at("q2"), p1 = m.hw.at("p1"), p2 = m.hw.at("p2");
  auto rep = run_trials("prim2", p, [&](Rng& rng, CheckReport& r) {
    const std::size_t total = pick(rng, max_len + 1);
    const std::size_t left = pick(rng, total + 1);
    const Word u = random_reduced(tape_letters(m.hw, 1), left, rng);
    const Word v = random_reduced(tape_letters(m.hw, 2), total - left, rng);
    const Letter p0 = coin(rng, 0.5) ? p1 : p2;
    const Word w0 = standard_word({q1, p0, q2}, {u, v});
    const Computation c = fuzz_from(m, w0, 3 * max_len + 3, rng, p.shrink_bias);
    const bool left_form = v.empty(), right_form = u.empty();
    std::size_t hi = a_length(w0);
    const std::size_t l0 = hi;
    for (std::size_t t = 1; t < c.trace.size(); ++t) {
      const std::size_t lt = a_length(c.trace[t]);
      hi = std::max(hi, lt);
      if (t >= 2 && a_length(c.trace[t - 1]) > a_length(c.trace[t - 2]) && lt <= a_length(c.trace[t - 1]))
        r.fail(witness(m, w0, c.history.sub(0, t), "(1) growth stopped"));
      if (hi > std::max(l0, lt)) r.fail(witness(m, w0, c.history.sub(0, t), "(2) inner word longer than both ends"));
      const auto states = state_letters(c.trace[t]);
      const bool end_left = sectors_of(c.trace[t])[1].empty();
      if (left_form && end_left && states[1] == p0) r.fail(witness(m, w0, c.history.sub(0, t), "(4) returned to the same p-letter"));
      if ((left_form || right_form) && lt < l0) r.fail(witness(m, w0, c.history.sub(0, t), "(5) a-length dropped below |W_0|_a"));
    }
    if (c.length() > 0) r.count("nontrivial");

    // Clause (3) on the canonical pass.
    const Word h = primitive_canonical_history(m, u, Direction::Left);
    const Computation canon = run_checked(m, standard_word({q1, p1, q2}, {u, {}}), h);
    const Word& end = canon.end();
    const auto states = state_letters(end);
    if (!(states[1] == p2) || !(sectors_of(end)[0] == u) || !sectors_of(end)[1].empty())
      r.fail(witness(m, canon, "(3) canonical pass does not end at q1 u p2 q2"));
    if (h.size() != 2 * u.size() + 1) r.fail(witness(m, canon, "(3) t != 2k+1"));
    for (const auto& w : canon.trace)
      if (a_length(w) != u.size()) r.fail(witness(m, canon, "(3) length not constant"));
  });
  rep.params["alphabet"] = 3;
  rep.params["max_len"] = max_len;
  return rep;
}

// Projection lemma on the bases Q1 P P^-1 Q1^-1 and Q2^-1 P^-1 P Q2: starting
// from q1 p u p^-1 q1^-1 or q2^-1 p^-1 v p q2 the a-length never drops.
inline CheckReport fuzz_ewe(const CheckParams& p) {
  const SMachine m = make_primitive(letters_spec(2));
  const std::size_t L = p.len_or(16);
  const Word q1 = parse_word(m, "q1"), q2 = parse_word(m, "q2");
  const Word ps[] = {parse_word(m, "p1"), parse_word(m, "p2")};
  return run_trials("ewe", p, [&](Rng& rng, CheckReport& rep) {
    const Word& pp = ps[pick(rng, 2)];
    Word w0;
    if (coin(rng, 0.5))
      w0 = q1 * pp * random_reduced(tape_letters(m.hw, 2), 1 + pick(rng, 6), rng) * invert(pp) * invert(q1);
    else
      w0 = invert(q2) * invert(pp) * random_reduced(tape_letters(m.hw, 1), 1 + pick(rng, 6), rng) * pp * q2;
    auto c = fuzz_from(m, w0, pick(rng, L + 1), rng, p.shrink_bias);
    if (c.length() > 0) rep.count("nontrivial");
    for (const auto& w : c.trace)
      if (a_length(w) < a_length(w0)) {
        rep.fail(witness(m, c, "a-length dropped below |W_0|_a"));
        break;
      }
  });
}

// Compositions of primitive machines used by the Hprim check.
inline std::vector<SMachine> primitive_family() {
  auto s = letters_spec(2), t = letters_spec(2, Direction::Right);
  return {make_primitive(s), make_primitive(t), compose({s, s}, ComposeMode::Parallel),
          compose({s, t}, ComposeMode::Sequential), compose({t, s, s}, ComposeMode::Sequential)};
}

// Every P-letter (odd part) has an empty sector on at least one side.
inline bool p_letters_touch_q(const Word& w) {
  auto secs = sectors_of(w);
  for (std::size_t part = 1; part + 1 < secs.size() + 1; part += 2)
    if (!secs[part - 1].empty() && !secs[part].empty()) return false;
  return true;
}

// Compositions of primitive machines, standard base:
// (a) |W_j|_a <= max(|W_0|_a, |W_t|_a), monotone if every P-letter touches a Q-letter in W_0;
// (b) t <= ||W_0||+||W_t||-4, and t <= 2||W_t||-4 under the same condition.
inline CheckReport fuzz_hprim(const CheckParams& p) {
  const auto family = primitive_family();
  const std::size_t L = p.len_or(24);
  return run_trials("hprim", p, [&](Rng& rng, CheckReport& rep) {
    const SMachine& m = family[pick(rng, family.size())];
    Base b;
    for (std::uint32_t i = 0; i <= m.N(); ++i) b.push_back({i, 1});
    auto w0 = random_start_word(m, b, 3, rng);
    if (!w0) return;
    auto c = fuzz_from(m, *w0, pick(rng, L + 1), rng, p.shrink_bias);
    if (c.length() > 0) rep.count("nontrivial");
    const std::size_t a0 = a_length(c.start), at = a_length(c.end()), t = c.length();
    const bool touch = p_letters_touch_q(c.start);
    for (std::size_t i = 0; i < c.trace.size(); ++i) {
      if (a_length(c.trace[i]) > std::max(a0, at)) {
        rep.fail(witness(m, c, "(a) inner word longer than both ends"));
        return;
      }
      if (touch && i > 0 && a_length(c.trace[i]) < a_length(c.trace[i - 1])) {
        rep.fail(witness(m, c, "(a) a-length decreased although every P-letter touches a Q-letter"));
        return;
      }
    }
    if (t + 4 > c.start.size() + c.end().size()) rep.fail(witness(m, c, "(b) t > ||W_0||+||W_t||-4"));
    else if (touch && t + 4 > 2 * c.end().size()) rep.fail(witness(m, c, "(b) t > 2||W_t||-4"));
  });
}

// ---- machines with historical sectors ----------------------------------------------

inline std::vector<SMachine> historical_toys() {
  std::vector<SMachine> out{add_historical_sectors(make_primitive(letters_spec(2)))};
  for (std::uint64_t s : {11u, 12u, 13u}) {
    Rng rng(s);
    out.push_back(add_historical_sectors(random_normalized_machine(rng, 2 + s % 2, 4)));
  }
  return out;
}

inline bool historical_pair(const Hardware& hw, BaseLetter x, BaseLetter y) {
  const std::uint32_t a = sector_alphabet(hw, x, y);
  return a != 0 && a % 2 == 0;
}

inline bool has_historical_sector(const Hardware& hw, const Base& b) {
  for (std::size_t k = 0; k + 1 < b.size(); ++k)
    if (historical_pair(hw, b[k], b[k + 1])) return true;
  return false;
}

// Base Q_{i,l} Q_{i,r} with start content over one of X_{i,l}, X_{i,r}:
// ||H|| <= |W_t|_a and |W_0|_a <= |W_t|_a.
inline CheckReport fuzz_w(const CheckParams& p) {
  const auto toys = historical_toys();
  const std::size_t L = p.len_or(16);
  return run_trials("w", p, [&](Rng& rng, CheckReport& rep) {
    const SMachine& m = toys[pick(rng, toys.size())];
    const std::size_t N1 = (m.N() + 1) / 2;  // parts of the original machine minus one
    const std::size_t i = 1 + pick(rng, N1 - 1);
    const Base b{{hist_left_part(i), 1}, {hist_right_part(i), 1}};
    for (int attempt = 0; attempt < 32; ++attempt) {
      auto w0 = random_start_word(m, b, 0, rng);
      if (!w0) continue;
      const std::size_t R = m.rules.size();
      const bool left = coin(rng, 0.5);
      std::vector<Letter> half;
      for (std::size_t k = 0; k < R; ++k)
        half.push_back(tape_letter(static_cast<std::uint32_t>(historical_sector(i)), static_cast<std::uint32_t>(left ? k : R + k)));
      Word start = standard_word(state_letters(*w0), {random_reduced(half, pick(rng, 6), rng)});
      auto c = fuzz_from(m, start, pick(rng, L + 1), rng, p.shrink_bias);
      if (c.length() > 0) rep.count("nontrivial");
      if (c.length() > a_length(c.end())) rep.fail(witness(m, c, "||H|| > |W_t|_a"));
      else if (a_length(c.start) > a_length(c.end())) rep.fail(witness(m, c, "|W_0|_a > |W_t|_a"));
      return;
    }
  });
}

// Every admissible base of length >= 3 has a historical sector: exhaustive over
// all bases of length 3..5 of each toy machine, plus the bases of fuzzed computations.
inline CheckReport fuzz_three(const CheckParams& p) {
  const auto toys = historical_toys();
  const std::size_t L = p.len_or(12);
  CheckReport exhaustive;
  exhaustive.id = "three";
  std::uint64_t bases = 0;
  for (const auto& m : toys) {
    const std::uint32_t N = static_cast<std::uint32_t>(m.N());
    std::vector<Base> layer;
    for (std::uint32_t i = 0; i <= N; ++i)
      for (int s : {1, -1}) layer.push_back({{i, s}});
    for (std::size_t len = 2; len <= 5; ++len) {
      std::vector<Base> next;
      for (const auto& b : layer)
        for (std::uint32_t i = 0; i <= N; ++i)
          for (int s : {1, -1})
            if (sector_alphabet(m.hw, b.back(), {i, s}) != 0) {
              Base nb = b;
              nb.push_back({i, s});
              next.push_back(nb);
            }
      layer = std::move(next);
      for (const auto& b : layer) {
        if (len < 3) continue;
        ++bases;
        if (!has_historical_sector(m.hw, b)) {
          Word w;
          for (const auto& x : b) w.push({state_letter(x.part, 0), x.sign});
          exhaustive.fail({{"violation", "base without historical sector"}, {"machine", machine_to_json(m)},
                           {"base", format_word(m, w)}});
        }
      }
    }
  }
  auto rep = run_trials("three", p, [&](Rng& rng, CheckReport& r) {
    const SMachine& m = toys[pick(rng, toys.size())];
    auto w0 = random_start_word(m, random_base(m.hw, 3 + pick(rng, 4), rng), 3, rng);
    if (!w0) return;
    auto c = fuzz_from(m, *w0, pick(rng, L + 1), rng, p.shrink_bias);
    if (c.length() > 0) r.count("nontrivial");
    for (const auto& w : c.trace)
      if (!has_historical_sector(m.hw, base_of(w))) {
        r.fail(witness(m, c, "base without historical sector"));
        return;
      }
  });
  rep.merge(exhaustive);
  rep.trials -= exhaustive.trials;
  rep.count("exhaustive_bases", bases);
  return rep;
}

// Smallest 2h1 + 3h2 + 2h3 over all factorizations H = H1 H2^k H3.
inline std::size_t best_wi_bound(const Word& h) {
  std::size_t best = 2 * h.size();
  find_factorization(h, [&](const Factorization& f) {
    best = std::min(best, 2 * f.h1 + 3 * f.h2 + 2 * f.h3);
    return false;
  });
  return best;
}

// Two-letter base: every tape word w_i satisfies
// ||w_i|| <= ||w_0|| + ||w_t|| + 2h1 + 3h2 + 2h3 for every factorization.
inline CheckReport fuzz_wi(const CheckParams& p) {
  const auto toys = historical_toys();
  const std::size_t L = p.len_or(16);
  return run_trials("wi", p, [&](Rng& rng, CheckReport& rep) {
    const SMachine& m = toys[pick(rng, toys.size())];
    auto w0 = random_start_word(m, random_base(m.hw, 2, rng), 4, rng);
    if (!w0) return;
    Computation c;
    bool periodic = false;
    if (coin(rng, 0.5)) {
      auto letters = m.rule_letters();
      for (int attempt = 0; attempt < 16 && !periodic; ++attempt) {
        auto rnd = [&](std::size_t n) {
          Word h;
          while (h.size() < n) h.push(letters[pick(rng, letters.size())]);
          return h;
        };
        Word h2 = rnd(1 + pick(rng, 3));
        if (!is_cyclically_reduced(h2)) continue;
        Word h = rnd(pick(rng, 3)) * power(h2, static_cast<long long>(2 + pick(rng, 4)));
        h = h * rnd(pick(rng, 3));
        auto r = run(m, *w0, h);
        if (r.ok()) {
          c = r.comp;
          periodic = true;
        }
      }
    }
    if (!periodic) c = fuzz_from(m, *w0, pick(rng, L + 1), rng, p.shrink_bias);
    if (c.length() > 0) rep.count("nontrivial");
    const std::size_t bound = a_length(c.start) + a_length(c.end()) + best_wi_bound(c.history);
    for (const auto& w : c.trace)
      if (a_length(w) > bound) {
        rep.fail(witness(m, c, "||w_i|| exceeds ||w_0||+||w_t||+2h1+3h2+2h3"));
        return;
      }
    if (periodic) rep.count("periodic");
  });
}

// Base of length >= 3: |W_i|_a <= 9(|W_0|_a + |W_t|_a).
inline CheckReport fuzz_nine(const CheckParams& p, const std::vector<SMachine>& machines, const std::string& id = "nine") {
  const std::size_t L = p.len_or(16);
  return run_trials(id, p, [&](Rng& rng, CheckReport& rep) {
    const SMachine& m = machines[pick(rng, machines.size())];
    auto w0 = random_start_word(m, random_base(m.hw, 3 + pick(rng, 4), rng), 3, rng);
    if (!w0) return;
    auto c = fuzz_from(m, *w0, pick(rng, L + 1), rng, p.shrink_bias);
    if (c.length() > 0) rep.count("nontrivial");
    const std::size_t bound = 9 * (a_length(c.start) + a_length(c.end()));
    for (const auto& w : c.trace)
      if (a_length(w) > bound) {
        rep.fail(witness(m, c, "|W_i|_a > 9(|W_0|_a+|W_t|_a)"));
        return;
      }
  });
}

// If theta locks the sector Y_j, no theta-admissible word has Q_{j-1}Q_{j-1}^-1
// or Q_j^-1 Q_j in its base.
inline CheckReport fuzz_qqiv(const CheckParams& p) {
  return run_trials("qqiv", p, [&](Rng& rng, CheckReport& rep) {
    Rng mr(rng());
    const SMachine m = random_normalized_machine(mr, 2 + pick(rng, 2), 4);
    const auto letters = m.rule_letters();
    const Sym th = letters[pick(rng, letters.size())];
    const Rule& r = m.rule(th);
    std::vector<std::size_t> locked;
    for (std::size_t j = 1; j <= m.N(); ++j)
      if (r.locks(j) && m.hw.tape_size(j) > 0) locked.push_back(j);
    if (locked.empty()) return;
    const std::size_t j = locked[pick(rng, locked.size())];
    const bool left = coin(rng, 0.5);
    const std::uint32_t part = static_cast<std::uint32_t>(left ? j - 1 : j);
    Letter q;
    for (const auto& pt : r.parts)
      for (const auto& l : state_letters(th.sign > 0 ? pt.from : pt.to))
        if (l.alphabet == part) q = l;
    Word u = random_reduced(tape_letters(m.hw, j), 1 + pick(rng, 4), rng);
    Word qw = Word::letter(q);
    Word w = left ? qw * u * invert(qw) : invert(qw) * u * qw;
    if (applicable(m, th, w)) rep.fail(witness(m, w, Word{th}, "rule applies to a word with a forbidden base"));
  });
}

// ---- division machines ---------------------------------------------------------------

struct DivisionCase {
  long long k, l;
  bool reachable;
  std::optional<std::size_t> shortest;
};

// D1: from s a^k s1 t1 b^l t' a computation ending in s a^k t2 t' (T(1)T(2)
// emptied and closed by t3) exists iff 2k | l, and the shortest one has length
// |l| + |l/k| + 1. Without the t2 requirement the sector can also be emptied by
// "wrong" transitions (both S-sectors growing while t1 keeps erasing b), for
// any l within the caps; those cases are counted in stats, not as failures.
inline CheckReport check_div(const std::vector<long long>& ks = {1, 2, 3}, long long lmax = 24, std::size_t depth = 120,
                             std::size_t cap = 40) {
  const SMachine m = make_division(1);
  CheckReport rep;
  rep.id = "div";
  rep.params = {{"k", ks}, {"l_max", lmax}, {"max_depth", depth}, {"max_a_length", cap}};
  SearchLimits lim;
  lim.max_depth = depth;
  lim.max_a_length = cap;
  const Letter t2 = m.hw.at("t2");
  json cases = json::array();
  std::uint64_t wrong_empties = 0;
  for (long long k : ks)
    for (long long l = -lmax; l <= lmax; ++l) {
      ++rep.trials;
      const Word w0 = division_input(m, k, l);
      auto empty = [](const Word& w) { return sectors_of(w)[2].empty(); };
      auto done = [&](const Word& w) { return state_letters(w)[2] == t2 && sectors_of(w)[2].empty(); };
      const bool divisible = l % (2 * k) == 0;
      const std::string tag = "k=" + std::to_string(k) + " l=" + std::to_string(l);
      auto b = search_computations(m, w0, done, lim);
      if (b.history.has_value() != divisible)
        rep.fail(witness(m, w0, b.history.value_or(Word{}),
                         tag + (divisible ? ": t2 not reached although 2k divides l" : ": t2 reached although 2k does not divide l")));
      if (divisible) {
        const std::size_t want = static_cast<std::size_t>(std::llabs(l) + std::llabs(l / k) + 1);
        if (b.history && b.history->size() != want)
          rep.fail(witness(m, w0, *b.history,
                           tag + ": shortest length " + std::to_string(b.history->size()) + ", expected " + std::to_string(want)));
        cases.push_back({{"k", k}, {"l", l}, {"shortest", b.history ? json(b.history->size()) : json()}});
      } else if (search_computations(m, w0, empty, lim).history) {
        ++wrong_empties;
      }
    }
  rep.stats["divisible_cases"] = cases;
  rep.stats["nondivisible_emptied_by_wrong_transitions"] = wrong_empties;
  return rep;
}

// D4 with k = 1 accepts exactly the l in [0, lmax] divisible by (2k)^3, and the
// shortest accepting lengths stay within a factor 2 of each other after
// dividing by |l|+|k|.
inline CheckReport check_div3(long long k = 1, long long lmax = 20, std::size_t depth = 200, std::size_t cap = 40) {
  const SMachine m = make_division(4);
  CheckReport rep;
  rep.id = "div3";
  rep.params = {{"k", k}, {"l_max", lmax}, {"max_depth", depth}, {"max_a_length", cap}};
  SearchLimits lim;
  lim.max_depth = depth;
  lim.max_a_length = cap;
  const long long cube = 8 * k * k * k;
  json lengths = json::object();
  double lo = 1e300, hi = 0;
  for (long long l = 0; l <= lmax; ++l) {
    ++rep.trials;
    const Word w0 = division_input(m, k, l);
    auto s = search_computations(m, w0, [&](const Word& w) { return w == *m.accept; }, lim);
    const bool want = l % cube == 0;
    if (s.history.has_value() != want)
      rep.fail(witness(m, w0, s.history.value_or(Word{}),
                       "l=" + std::to_string(l) + (want ? ": not accepted" : ": accepted")));
    if (s.history) {
      lengths[std::to_string(l)] = s.history->size();
      const double ratio = static_cast<double>(s.history->size()) / static_cast<double>(std::llabs(l) + std::llabs(k));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  rep.stats["accepting_lengths"] = lengths;
  if (hi > 0) {
    rep.stats["ratio_spread"] = hi / lo;
    if (hi > 2 * lo) rep.fail({{"violation", "accepting lengths not within a factor-2 envelope of |l|+|k|"}, {"spread", hi / lo}});
  }
  return rep;
}

// ---- mixture laws --------------------------------------------------------------------

inline json mixture_report_json(const MixtureLawReport& r) {
  json j = json::object();
  for (const auto& [clause, n] : r.cases) {
    j[clause] = {{"cases", n}, {"violations", r.violations.at(clause)}};
    if (auto it = r.first_witness.find(clause); it != r.first_witness.end()) j[clause]["first"] = it->second;
  }
  return j;
}

// Exhaustive over bead sequences of <= 8 beads with J <= 3, then p.trials random
// necklaces of up to p.max_len (default 64) beads. "b.corrected" is reported but
// is not one of the stated clauses.
inline CheckReport check_mixture(const CheckParams& p) {
  CheckReport rep;
  rep.id = "mixture";
  const std::size_t max_beads = p.len_or(64);
  rep.params = p.to_json();
  const MixtureLawReport ex = mixture_laws_exhaustive(8, 3);
  const MixtureLawReport fz = mixture_laws_fuzz(p.trials, max_beads, 3, p.seed);
  rep.trials = ex.necklaces + fz.necklaces;
  for (const auto* r : {&ex, &fz})
    for (const auto& [clause, n] : r->violations) {
      if (clause == "b.corrected" || n == 0) continue;
      rep.fail({{"clause", clause}, {"violations", n}, {"example", r->first_witness.at(clause)}});
      rep.failure_count += n - 1;
    }
  rep.stats["exhaustive"] = mixture_report_json(ex);
  rep.stats["fuzz"] = mixture_report_json(fz);
  return rep;
}

// ---- registry ------------------------------------------------------------------------

inline const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {"gen", "gen1", "gen2",  "gen3", "qqiv", "prim", "prim2", "ewe",
                                               "hprim", "w", "three", "wi",  "nine", "div",  "div3", "mixture"};
  return ids;
}

inline CheckReport run_check(const std::string& id, const CheckParams& p) {
  CheckReport r;
  if (id == "gen") r = fuzz_gen(p);
  else if (id == "gen1") r = fuzz_gen1(p);
  else if (id == "gen2" || id == "gen3") r = fuzz_gen2(p, id);
  else if (id == "qqiv") r = fuzz_qqiv(p);
  else if (id == "prim") r = check_prim_exhaustive(4, p.len_or(12));
  else if (id == "prim2") r = fuzz_prim2(p);
  else if (id == "ewe") r = fuzz_ewe(p);
  else if (id == "hprim") r = fuzz_hprim(p);
  else if (id == "w") r = fuzz_w(p);
  else if (id == "three") r = fuzz_three(p);
  else if (id == "wi") r = fuzz_wi(p);
  else if (id == "nine" || id == "9") r = fuzz_nine(p, historical_toys(), "nine");
  else if (id == "div") r = check_div();
  else if (id == "div3") r = check_div3();
  else if (id == "mixture") r = check_mixture(p);
  else throw std::invalid_argument("unknown lemma id '" + id + "'");
  return r;
}

}  // namespace smach
