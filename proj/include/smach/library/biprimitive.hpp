#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "smach/engine.hpp"
#include "smach/library/zmachine.hpp"
#include "smach/transforms/common.hpp"

namespace smach {

// Base S_0 K_1 P_1 S_1 ... K_N P_N S_N of the composition of a machine with
// Z-machines. Parts: S_j = 3j, K_j = 3j-2, P_j = 3j-1. Sector j of the source
// splits into SK (3j-2, copy Y'), KP (3j-1, copy Y'') and PS (3j, copy Y''').
struct BiprimitiveStage {
  std::vector<std::size_t> sectors;
  Direction dir = Direction::Left;
  std::vector<std::uint32_t> chi1, chi3;  // per letter index
  std::uint32_t chi2 = 0, chi4 = 0;
};

struct BiprimitiveRule {
  std::uint32_t minus = 0, bar = 0, plus = 0;
  std::vector<BiprimitiveStage> pre, post;
};

struct Biprimitive {
  SMachine machine;
  SMachine source;
  std::vector<BiprimitiveRule> rules;                   // per source rule
  std::vector<std::optional<std::size_t>> source_rule;  // per rule: source index of a barred rule
};

namespace detail {

inline std::uint32_t bp_s(std::size_t j) { return static_cast<std::uint32_t>(3 * j); }
inline std::uint32_t bp_k(std::size_t j) { return static_cast<std::uint32_t>(3 * j - 2); }
inline std::uint32_t bp_p(std::size_t j) { return static_cast<std::uint32_t>(3 * j - 1); }

// Stages after the barred rule: the sectors of the moving parts first (left
// sweeps), then the sectors to their left from right to left (left sweeps),
// then the sectors to their right from left to right (right sweeps).
inline std::vector<std::pair<std::vector<std::size_t>, Direction>> bp_stage_plan(const SMachine& m, const Rule& th) {
  const std::size_t N = m.N();
  std::set<std::size_t> active;
  for (const auto& p : th.parts) {
    if (p.from == p.to) continue;
    std::size_t i = simple_side(p.from)->q.alphabet;
    active.insert(std::clamp<std::size_t>(i, 1, N));
  }
  std::vector<std::pair<std::vector<std::size_t>, Direction>> plan;
  std::vector<std::size_t> first(active.begin(), active.end());
  bool same = true;
  for (auto j : first) same = same && m.hw.tape_size(j) == m.hw.tape_size(first[0]);
  if (same) {
    plan.push_back({first, Direction::Left});
  } else {
    for (auto j : first) plan.push_back({{j}, Direction::Left});
  }
  const std::size_t i0 = first.front();
  for (std::size_t j = i0 - 1; j >= 1; --j)
    if (!active.count(j)) plan.push_back({{j}, Direction::Left});
  for (std::size_t j = i0 + 1; j <= N; ++j)
    if (!active.count(j)) plan.push_back({{j}, Direction::Right});
  return plan;
}

}  // namespace detail

inline Biprimitive make_biprimitive(const SMachine& src) {
  using namespace detail;
  if (!has_simple_parts(src)) throw std::invalid_argument("biprimitive: incompatible bases (parts must have one-letter bases)");
  const std::size_t N = src.N();
  const std::size_t T = src.rules.size();
  Biprimitive bp;
  bp.source = src;
  SMachine& m = bp.machine;
  m.name = src.name + "-biprimitive";

  // state letters: untagged, then per (rule, phase) copies
  auto tag = [&](std::size_t t, int ph) { return "@" + src.rules[t].name + (ph == 0 ? "-" : "+"); };
  for (std::size_t j = 0; j <= N; ++j) {
    if (j > 0) {
      // k<j>, p<j>: angle brackets keep them apart from source letters such as p1
      const std::string kn = "k<" + std::to_string(j) + ">", pn = "p<" + std::to_string(j) + ">";
      Alphabet k{"K" + std::to_string(j), {kn}}, p{"P" + std::to_string(j), {pn}};
      for (std::size_t t = 0; t < T; ++t)
        for (int ph = 0; ph < 2; ++ph)
          for (int c = 0; c <= 3; ++c) {
            k.letters.push_back(kn + tag(t, ph) + "(" + std::to_string(c) + ")");
            p.letters.push_back(pn + tag(t, ph) + "(" + std::to_string(c) + ")");
          }
      m.hw.parts.push_back(k);
      m.hw.parts.push_back(p);
    }
    Alphabet s{src.hw.parts[j].name, src.hw.parts[j].letters};
    for (std::size_t t = 0; t < T; ++t)
      for (int ph = 0; ph < 2; ++ph)
        for (const auto& q : src.hw.parts[j].letters) s.letters.push_back(q + tag(t, ph));
    m.hw.parts.push_back(s);
  }
  for (std::size_t j = 1; j <= N; ++j)
    for (int c = 1; c <= 3; ++c) {
      Alphabet a{src.hw.tape(j).name + "." + std::to_string(c), {}};
      for (const auto& x : src.hw.tape(j).letters) a.letters.push_back(x + "." + std::to_string(c));
      m.hw.tapes.push_back(a);
    }
  m.hw.index();

  auto S = [&](std::size_t j, Letter q, int t, int ph) {
    std::uint32_t sym = q.symbol;
    if (t >= 0) sym += static_cast<std::uint32_t>(src.hw.parts[j].letters.size() * (1 + 2 * static_cast<std::size_t>(t) + static_cast<std::size_t>(ph)));
    return Word::letter(state_letter(bp_s(j), sym));
  };
  auto KP = [&](bool is_k, std::size_t j, int t, int ph, int c) {
    std::uint32_t sym = t < 0 ? 0 : static_cast<std::uint32_t>(1 + (2 * t + ph) * 4 + c);
    return Word::letter(state_letter(is_k ? bp_k(j) : bp_p(j), sym));
  };
  auto tape = [&](std::size_t j, int copy, const Word& w) {
    return map_letters(w, [&](Letter l) { return tape_letter(static_cast<std::uint32_t>(3 * j - 3 + static_cast<std::size_t>(copy)), l.symbol); });
  };
  auto blank = [&](std::string name) {
    Rule r;
    r.name = std::move(name);
    r.parts.resize(3 * N + 1);
    r.permit = m.full_permit();
    return r;
  };
  auto lock = [&](Rule& r, std::size_t sector) { std::fill(r.permit[sector].begin(), r.permit[sector].end(), 0); };
  auto add = [&](Rule r, std::optional<std::size_t> source) {
    m.rules.push_back(std::move(r));
    bp.source_rule.push_back(source);
    return static_cast<std::uint32_t>(m.rules.size() - 1);
  };

  for (std::size_t t = 0; t < T; ++t) {
    const Rule& th = src.rules[t];
    const int ti = static_cast<int>(t);
    std::vector<SimpleSide> from, to;
    for (const auto& p : th.parts) {
      from.push_back(*simple_side(p.from));
      to.push_back(*simple_side(p.to));
    }
    auto plan = bp_stage_plan(src, th);
    std::vector<int> post_stage(N + 1, -1), pre_stage(N + 1, -1);
    for (std::size_t g = 0; g < plan.size(); ++g)
      for (auto j : plan[g].first) {
        post_stage[j] = static_cast<int>(g);
        pre_stage[j] = static_cast<int>(plan.size() - 1 - g);
      }
    BiprimitiveRule br;

    // chi_-(theta)
    {
      Rule r = blank("chi-(" + th.name + ")");
      for (std::size_t j = 0; j <= N; ++j) {
        r.parts[bp_s(j)] = {S(j, from[j].q, -1, 0), S(j, from[j].q, ti, 0)};
        if (j == 0) continue;
        int c = pre_stage[j] == 0 ? 1 : 0;
        r.parts[bp_k(j)] = {KP(true, j, -1, 0, 0), KP(true, j, ti, 0, c)};
        r.parts[bp_p(j)] = {KP(false, j, -1, 0, 0), KP(false, j, ti, 0, c)};
        lock(r, 3 * j - 2);
        lock(r, 3 * j);
      }
      br.minus = add(std::move(r), std::nullopt);
    }

    // Z stages of one phase
    auto stages = [&](int ph) {
      std::vector<BiprimitiveStage> out;
      const auto& stage_of = ph == 0 ? pre_stage : post_stage;
      const std::size_t G = plan.size();
      for (std::size_t g = 0; g < G; ++g) {
        const std::size_t pg = ph == 0 ? G - 1 - g : g;
        BiprimitiveStage st;
        st.sectors = plan[pg].first;
        st.dir = plan[pg].second;
        std::string sec_names;
        for (auto j : st.sectors) sec_names += (sec_names.empty() ? "" : ",") + std::to_string(j);
        const std::size_t width = src.hw.tape_size(st.sectors[0]);
        for (const auto& zs : z_steps(st.dir)) {
          const bool lettered = zs.kind == 1 || zs.kind == 3;
          for (std::uint32_t x = 0; x < (lettered ? width : 1); ++x) {
            std::string name = "chi" + std::to_string(zs.kind) + "{" + th.name + (ph == 0 ? "-" : "+") + ":" + sec_names + "}";
            if (lettered) name += "(" + src.hw.tape(st.sectors[0]).letters[x] + ")";
            Rule r = blank(name);
            for (std::size_t j = 0; j <= N; ++j) {
              const Letter q = ph == 0 ? from[j].q : to[j].q;
              r.parts[bp_s(j)] = {S(j, q, ti, ph), S(j, q, ti, ph)};
              if (j == 0) continue;
              const int sg = stage_of[j];
              if (sg == static_cast<int>(g)) {
                auto tw = [&](const std::vector<std::pair<int, int>>& spec) {
                  Word w;
                  for (auto [c, s] : spec) w.push({tape_letter(static_cast<std::uint32_t>(3 * j - 3 + static_cast<std::size_t>(c)), x), s});
                  return w;
                };
                r.parts[bp_k(j)] = {KP(true, j, ti, ph, zs.k_from), tw(zs.k_left) * KP(true, j, ti, ph, zs.k_to) * tw(zs.k_right)};
                r.parts[bp_p(j)] = {KP(false, j, ti, ph, zs.p_from), tw(zs.p_left) * KP(false, j, ti, ph, zs.p_to) * tw(zs.p_right)};
                for (int l : zs.locks) lock(r, 3 * j - 3 + static_cast<std::size_t>(l));
              } else {
                int c = sg < static_cast<int>(g) ? 3 : 0;
                int c2 = (zs.kind == 4 && sg == static_cast<int>(g) + 1) ? 1 : c;
                r.parts[bp_k(j)] = {KP(true, j, ti, ph, c), KP(true, j, ti, ph, c2)};
                r.parts[bp_p(j)] = {KP(false, j, ti, ph, c), KP(false, j, ti, ph, c2)};
                lock(r, 3 * j - 2);
                lock(r, 3 * j);
              }
            }
            const std::uint32_t k = add(std::move(r), std::nullopt);
            if (zs.kind == 1) st.chi1.push_back(k);
            if (zs.kind == 2) st.chi2 = k;
            if (zs.kind == 3) st.chi3.push_back(k);
            if (zs.kind == 4) st.chi4 = k;
          }
        }
        out.push_back(std::move(st));
      }
      return out;
    };
    br.pre = stages(0);

    // theta-bar
    {
      Rule r = blank(th.name);
      for (std::size_t j = 0; j <= N; ++j) {
        r.parts[bp_s(j)] = {S(j, from[j].q, ti, 0), S(j, to[j].q, ti, 1)};
        if (j == 0) continue;
        int c = post_stage[j] == 0 ? 1 : 0;
        r.parts[bp_k(j)] = {KP(true, j, ti, 0, 3) * tape(j, 2, from[j - 1].u), KP(true, j, ti, 1, c) * tape(j, 2, to[j - 1].u)};
        r.parts[bp_p(j)] = {tape(j, 2, from[j].v) * KP(false, j, ti, 0, 3), tape(j, 2, to[j].v) * KP(false, j, ti, 1, c)};
        r.permit[3 * j - 1] = th.permit[j];
        lock(r, 3 * j - 2);
        lock(r, 3 * j);
      }
      br.bar = add(std::move(r), t);
    }
    br.post = stages(1);

    // chi_+(theta)
    {
      Rule r = blank("chi+(" + th.name + ")");
      for (std::size_t j = 0; j <= N; ++j) {
        r.parts[bp_s(j)] = {S(j, to[j].q, ti, 1), S(j, to[j].q, -1, 0)};
        if (j == 0) continue;
        r.parts[bp_k(j)] = {KP(true, j, ti, 1, 3), KP(true, j, -1, 0, 0)};
        r.parts[bp_p(j)] = {KP(false, j, ti, 1, 3), KP(false, j, -1, 0, 0)};
        lock(r, 3 * j - 2);
        lock(r, 3 * j);
      }
      br.plus = add(std::move(r), std::nullopt);
    }
    bp.rules.push_back(std::move(br));
  }
  m.finalize();
  return bp;
}

// iota(W): k_j and p_j inserted around every sector of a standard-base word,
// the sector content moved to the KP copy.
inline Word bp_iota(const Biprimitive& bp, const Word& w) {
  using namespace detail;
  auto states = state_letters(w);
  auto secs = sectors_of(w);
  const std::size_t N = bp.source.N();
  if (states.size() != N + 1) throw std::invalid_argument("iota needs a standard-base word");
  std::vector<Letter> st;
  std::vector<Word> sec;
  for (std::size_t j = 0; j <= N; ++j) {
    if (j > 0) {
      st.push_back(state_letter(bp_k(j), 0));
      st.push_back(state_letter(bp_p(j), 0));
      sec.push_back({});
      sec.push_back(map_letters(secs[j - 1], [&](Letter l) { return tape_letter(static_cast<std::uint32_t>(3 * j - 1), l.symbol); }));
      sec.push_back({});
    }
    st.push_back(state_letter(bp_s(j), states[j].symbol));
  }
  return standard_word(st, sec);
}

// pi(W): drops k- and p-letters and tags, merges the three tape copies.
inline Word bp_project(const Biprimitive& bp, const Word& w) {
  Word out;
  for (const auto& s : w) {
    const Letter& l = s.letter;
    if (l.kind == Kind::State) {
      if (l.alphabet % 3 != 0) continue;
      const std::size_t j = l.alphabet / 3;
      const auto n = static_cast<std::uint32_t>(bp.source.hw.parts[j].letters.size());
      out.push({state_letter(static_cast<std::uint32_t>(j), l.symbol % n), s.sign});
    } else {
      out.push({tape_letter((l.alphabet + 2) / 3, l.symbol), s.sign});
    }
  }
  return out;
}

// pi(H): barred rules become source rules, chi-rules are dropped.
inline Word bp_project_history(const Biprimitive& bp, const Word& h) {
  Word out;
  for (const auto& s : h)
    if (auto k = bp.source_rule.at(s.letter.symbol)) out.push({rule_letter(static_cast<std::uint32_t>(*k)), s.sign});
  return out;
}

// The canonical computation iota(W) -> iota(W.theta): chi_-, the Z passes in
// reverse order, theta-bar, the Z passes, chi_+.
inline Computation bp_canonical(const Biprimitive& bp, const Word& w, std::size_t theta) {
  const SMachine& m = bp.machine;
  const BiprimitiveRule& br = bp.rules.at(theta);
  Computation c;
  c.start = bp_iota(bp, w);
  c.trace.push_back(c.start);
  auto step = [&](std::uint32_t rule, int sign) {
    Sym s{rule_letter(rule), sign};
    c.trace.push_back(apply(m, s, c.trace.back()));
    c.history.push(s);
  };
  auto sector = [&](std::size_t idx) { return sectors_of(c.trace.back()).at(idx - 1); };
  auto pass = [&](const BiprimitiveStage& st) {
    const std::size_t j = st.sectors.front();
    if (st.dir == Direction::Left) {
      for (Word kp = sector(3 * j - 1); !kp.empty(); kp = sector(3 * j - 1)) step(st.chi1.at(kp.back().letter.symbol), kp.back().sign);
      step(st.chi2, 1);
      for (Word ps = sector(3 * j); !ps.empty(); ps = sector(3 * j)) step(st.chi3.at(ps.front().letter.symbol), ps.front().sign);
    } else {
      for (Word kp = sector(3 * j - 1); !kp.empty(); kp = sector(3 * j - 1)) step(st.chi1.at(kp.front().letter.symbol), kp.front().sign);
      step(st.chi2, 1);
      for (Word sk = sector(3 * j - 2); !sk.empty(); sk = sector(3 * j - 2)) step(st.chi3.at(sk.back().letter.symbol), sk.back().sign);
    }
    step(st.chi4, 1);
  };
  step(br.minus, 1);
  for (const auto& st : br.pre) pass(st);
  step(br.bar, 1);
  for (const auto& st : br.post) pass(st);
  step(br.plus, 1);
  return c;
}

// Canonical lift of a whole source computation from a standard-base word.
inline Computation bp_lift(const Biprimitive& bp, const Word& w0, const Word& history) {
  Computation c;
  c.start = bp_iota(bp, w0);
  c.trace.push_back(c.start);
  Word w = w0;
  for (const auto& s : history) {
    if (s.sign < 0) throw std::invalid_argument("bp_lift: only positive source rules are lifted");
    Computation part = bp_canonical(bp, w, s.letter.symbol);
    for (std::size_t i = 0; i < part.history.size(); ++i) {
      c.history.push(part.history[i]);
      c.trace.push_back(part.trace[i + 1]);
    }
    w = apply(bp.source, s, w);
  }
  return c;
}

}  // namespace smach
