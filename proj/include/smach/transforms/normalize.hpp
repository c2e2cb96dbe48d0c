#pragma once

#include <set>
#include <string>
#include <vector>

#include "smach/engine.hpp"
#include "smach/transforms/common.hpp"

namespace smach {

struct Normalized {
  SMachine machine;
  // Positive rule k of the source machine -> its history in `machine`.
  std::vector<Word> translation;

  Word translate(const Word& h) const {
    Word out;
    for (const auto& s : h) {
      const Word& t = translation.at(s.letter.symbol);
      out.append(s.sign > 0 ? t : invert(t));
    }
    return out;
  }
  std::size_t max_factor() const {
    std::size_t f = 1;
    for (const auto& t : translation) f = std::max(f, t.size());
    return f;
  }
};

namespace detail {

struct Namer {
  SMachine& m;
  std::set<std::string> letters, rules;

  explicit Namer(SMachine& mm) : m(mm) {}
  Letter state(std::uint32_t part, const std::string& base) {
    std::string n = fresh_name(m.hw, letters, base);
    auto& ls = m.hw.parts.at(part).letters;
    ls.push_back(n);
    return state_letter(part, static_cast<std::uint32_t>(ls.size() - 1));
  }
  std::string rule(std::string base) {
    while (rules.count(base)) base += "'";
    rules.insert(base);
    return base;
  }
  const std::string& name(Letter l) const { return m.hw.parts.at(l.alphabet).letters.at(l.symbol); }
};

inline Word one(Letter l) { return Word::letter(l); }

// Split positions of the state letters of one side of a part.
inline std::vector<std::size_t> state_positions(const Word& w) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].letter.kind == Kind::State) pos.push_back(i);
  return pos;
}

// Property (1): one rule with multi-letter parts becomes theta.1 theta.2 theta.3.
inline std::vector<Rule> split_multi(Namer& nm, const Rule& th) {
  bool multi = false;
  for (const auto& p : th.parts) multi = multi || !simple_side(p.from);
  if (!multi) return {th};
  const std::size_t N = nm.m.N();
  std::vector<Letter> aux1(N + 1), aux2(N + 1);
  for (const auto& p : th.parts) {
    for (const auto& s : p.from) {
      if (s.letter.kind != Kind::State) continue;
      const std::string& base = nm.name(s.letter);
      aux1[s.letter.alphabet] = nm.state(s.letter.alphabet, base + "[" + th.name + ".1]");
      aux2[s.letter.alphabet] = nm.state(s.letter.alphabet, base + "[" + th.name + ".2]");
    }
  }
  Rule r1{nm.rule(th.name + ".1"), {}, th.permit};
  Rule r2{nm.rule(th.name + ".2"), {}, widened_permit(th)};
  Rule r3{nm.rule(th.name + ".3"), {}, th.permit};
  for (const auto& p : th.parts) {
    if (auto a = simple_side(p.from)) {
      auto b = simple_side(p.to);
      const std::uint32_t j = a->q.alphabet;
      r1.parts.push_back({p.from, b->v * one(aux1[j]) * b->u});
      r2.parts.push_back({one(aux1[j]), one(aux2[j])});
      r3.parts.push_back({one(aux2[j]), one(b->q)});
      continue;
    }
    auto pu = state_positions(p.from), pv = state_positions(p.to);
    const std::size_t k = pu.size();
    for (std::size_t t = 0; t < k; ++t) {
      const std::uint32_t j = p.from[pu[t]].letter.alphabet;
      std::size_t ub = t == 0 ? 0 : pu[t], ue = t + 1 < k ? pu[t + 1] : p.from.size();
      std::size_t vb = t == 0 ? 0 : pv[t], ve = t + 1 < k ? pv[t + 1] : p.to.size();
      r1.parts.push_back({p.from.sub(ub, ue), one(aux1[j])});
      r2.parts.push_back({one(aux1[j]), one(aux2[j])});
      r3.parts.push_back({one(aux2[j]), p.to.sub(vb, ve)});
      if (t + 1 < k) std::fill(r2.permit[j + 1].begin(), r2.permit[j + 1].end(), 0);
    }
  }
  return {r1, r2, r3};
}

// Property (2) (or (3) when `total`): a rule with one-letter parts becomes a
// chain of rules each moving at most one tape letter per side (per rule).
inline std::vector<Rule> split_long(Namer& nm, const Rule& th, bool total) {
  if (rule_is_short(th, total)) return {th};
  struct Op {
    std::size_t part;
    bool left;
    Sym letter;
  };
  const std::size_t np = th.parts.size();
  std::vector<SimpleSide> from(np), to(np);
  std::vector<std::vector<Sym>> lops(np), rops(np);
  for (std::size_t j = 0; j < np; ++j) {
    from[j] = *simple_side(th.parts[j].from);
    to[j] = *simple_side(th.parts[j].to);
    Word l = invert(from[j].v) * to[j].v;  // left sector gets multiplied by l on the right
    Word r = to[j].u * invert(from[j].u);  // right sector gets multiplied by r on the left
    lops[j].assign(l.begin(), l.end());
    rops[j].assign(r.syms().rbegin(), r.syms().rend());  // innermost letter first
  }
  std::vector<std::vector<Op>> steps;
  if (total) {
    for (std::size_t j = 0; j < np; ++j) {
      for (const auto& s : lops[j]) steps.push_back({{j, true, s}});
      for (const auto& s : rops[j]) steps.push_back({{j, false, s}});
    }
  } else {
    std::size_t k = 0;
    for (std::size_t j = 0; j < np; ++j) k = std::max({k, lops[j].size(), rops[j].size()});
    steps.resize(k);
    for (std::size_t j = 0; j < np; ++j) {
      for (std::size_t s = 0; s < lops[j].size(); ++s) steps[s].push_back({j, true, lops[j][s]});
      for (std::size_t s = 0; s < rops[j].size(); ++s) steps[s].push_back({j, false, rops[j][s]});
    }
  }
  if (steps.empty()) steps.emplace_back();
  const std::size_t k = steps.size();
  // states[j][s]: state of part j after step s
  std::vector<std::vector<Letter>> states(np, std::vector<Letter>(k + 1));
  for (std::size_t j = 0; j < np; ++j) {
    states[j][0] = from[j].q;
    states[j][k] = to[j].q;
    for (std::size_t s = 1; s < k; ++s)
      states[j][s] = nm.state(from[j].q.alphabet, nm.name(from[j].q) + "[" + th.name + "#" + std::to_string(s) + "]");
  }
  std::vector<Rule> out;
  const auto wide = widened_permit(th);
  for (std::size_t s = 0; s < k; ++s) {
    std::string name = k == 1 ? th.name : nm.rule(th.name + "#" + std::to_string(s + 1));
    Rule r{name, {}, (s == 0 || s + 1 == k) ? th.permit : wide};
    for (std::size_t j = 0; j < np; ++j) {
      Word v, u;
      for (const auto& op : steps[s]) {
        if (op.part != j) continue;
        (op.left ? v : u).push(op.letter);
      }
      r.parts.push_back({one(states[j][s]), v * one(states[j][s + 1]) * u});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

// Rewrites m so that every part has a one-letter base and moves at most one
// tape letter per side (with `property3`, at most one per rule). Rules that
// already comply are kept as they are.
inline Normalized normalize(const SMachine& m, bool property3 = false) {
  Normalized res;
  res.machine = m;
  SMachine& out = res.machine;
  out.rules.clear();
  detail::Namer nm(out);
  // rule names of the source stay reserved so that kept rules keep their names
  for (const auto& r : m.rules) nm.rules.insert(r.name);

  std::vector<std::vector<Rule>> chains;
  for (const auto& th : m.rules) {
    std::vector<Rule> chain;
    for (const auto& r : detail::split_multi(nm, th)) {
      auto more = detail::split_long(nm, r, property3);
      chain.insert(chain.end(), more.begin(), more.end());
    }
    chains.push_back(std::move(chain));
  }
  for (auto& chain : chains) {
    Word t;
    for (auto& r : chain) {
      t.push({rule_letter(static_cast<std::uint32_t>(out.rules.size())), 1});
      out.rules.push_back(std::move(r));
    }
    res.translation.push_back(t);
  }
  out.finalize();
  return res;
}

}  // namespace smach
