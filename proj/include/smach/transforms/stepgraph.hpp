#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "smach/engine.hpp"

namespace smach {

// One step of a multi-step machine. All steps share the same number of parts
// and the same tape alphabets; their state letters are pairwise disjoint.
// `entry` and `exit` name one state letter per part: a connecting rule from
// step i to step j turns exit(i) into entry(j).
struct Step {
  std::string name;
  SMachine machine;
  std::vector<std::string> entry, exit;
};

struct StepGraph {
  std::vector<Step> steps;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct StepMachine {
  SMachine machine;
  std::vector<std::optional<std::size_t>> step_of_rule;  // nullopt for connecting rules
  std::map<std::pair<std::size_t, std::size_t>, Sym> connector;  // edge -> rule letter
};

inline StepMachine build_step_graph(const StepGraph& g) {
  if (g.steps.empty()) throw std::invalid_argument("step graph has no steps");
  StepMachine out;
  SMachine& m = out.machine;
  const Hardware& h0 = g.steps[0].machine.hw;
  const std::size_t N = h0.N();
  m.name = g.steps.size() == 1 ? g.steps[0].machine.name : "steps";
  m.hw.tapes = h0.tapes;
  for (std::size_t i = 0; i <= N; ++i) m.hw.parts.push_back({h0.parts[i].name, {}});
  std::set<std::string> seen;
  // letter renumbering per step: state (part, symbol) -> union symbol
  std::vector<std::vector<std::vector<std::uint32_t>>> remap(g.steps.size());
  for (std::size_t s = 0; s < g.steps.size(); ++s) {
    const Hardware& h = g.steps[s].machine.hw;
    if (h.N() != N) throw std::invalid_argument("step " + g.steps[s].name + ": different number of parts");
    for (std::size_t j = 1; j <= N; ++j)
      if (h.tape(j).letters != h0.tape(j).letters)
        throw std::invalid_argument("step " + g.steps[s].name + ": different tape alphabet in sector " + std::to_string(j));
    remap[s].resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
      for (const auto& l : h.parts[i].letters) {
        if (!seen.insert(l).second)
          throw std::invalid_argument("alphabet collision: state letter '" + l + "' in two steps");
        remap[s][i].push_back(static_cast<std::uint32_t>(m.hw.parts[i].letters.size()));
        m.hw.parts[i].letters.push_back(l);
      }
    }
  }
  m.hw.index();

  std::set<std::string> names;
  auto add_rule = [&](Rule r) {
    if (!names.insert(r.name).second) throw std::invalid_argument("rule name '" + r.name + "' used in two steps");
    m.rules.push_back(std::move(r));
    return static_cast<std::uint32_t>(m.rules.size() - 1);
  };
  for (std::size_t s = 0; s < g.steps.size(); ++s) {
    for (const auto& r : g.steps[s].machine.rules) {
      Rule copy = r;
      for (auto& p : copy.parts)
        for (Word* w : {&p.from, &p.to}) {
          Word x;
          for (const auto& sym : *w) {
            Letter l = sym.letter;
            if (l.kind == Kind::State) l.symbol = remap[s][l.alphabet][l.symbol];
            x.push({l, sym.sign});
          }
          *w = x;
        }
      add_rule(std::move(copy));
      out.step_of_rule.push_back(s);
    }
  }

  // A sector is locked by the connecting rule if all rules of either step lock it.
  auto locked_by_all = [&](std::size_t s, std::size_t j) {
    const auto& rs = g.steps[s].machine.rules;
    if (rs.empty()) return false;
    for (const auto& r : rs)
      if (!r.locks(j)) return false;
    return true;
  };
  auto vec = [&](std::size_t s, const std::vector<std::string>& names_) {
    if (names_.size() != N + 1) throw std::invalid_argument("step " + g.steps[s].name + ": entry/exit needs one letter per part");
    std::vector<Letter> v;
    for (std::size_t i = 0; i <= N; ++i) {
      auto l = g.steps[s].machine.hw.find(names_[i]);
      if (!l || l->kind != Kind::State || l->alphabet != i)
        throw std::invalid_argument("step " + g.steps[s].name + ": '" + names_[i] + "' is not a letter of part " + std::to_string(i));
      v.push_back(state_letter(static_cast<std::uint32_t>(i), remap[s][i][l->symbol]));
    }
    return v;
  };
  for (auto [a, b] : g.edges) {
    if (a >= g.steps.size() || b >= g.steps.size() || a == b) throw std::invalid_argument("bad step graph edge");
    if (out.connector.count({a, b})) continue;
    auto from = vec(a, g.steps[a].exit), to = vec(b, g.steps[b].entry);
    // theta(b,a) would be the inverse of theta(a,b): reuse it
    auto back = vec(b, g.steps[b].exit), fwd = vec(a, g.steps[a].entry);
    Rule r;
    r.name = "theta(" + g.steps[a].name + "," + g.steps[b].name + ")";
    r.permit = m.full_permit();
    for (std::size_t j = 1; j <= N; ++j)
      if (locked_by_all(a, j) || locked_by_all(b, j)) std::fill(r.permit[j].begin(), r.permit[j].end(), 0);
    for (std::size_t i = 0; i <= N; ++i) r.parts.push_back({Word::letter(from[i]), Word::letter(to[i])});
    const std::uint32_t k = add_rule(std::move(r));
    out.step_of_rule.push_back(std::nullopt);
    out.connector[{a, b}] = {rule_letter(k), 1};
    if (back == to && fwd == from) out.connector[{b, a}] = {rule_letter(k), -1};
  }
  if (g.steps.size() == 1) {
    m.input = g.steps[0].machine.input;
    m.input_sectors = g.steps[0].machine.input_sectors;
    m.accept = g.steps[0].machine.accept;
  }
  m.finalize();
  return out;
}

// Sequence of steps visited by a history: consecutive rules of one step
// collapse; connecting rules are skipped.
inline std::vector<std::size_t> step_history(const StepMachine& sm, const Word& h) {
  std::vector<std::size_t> out;
  for (const auto& s : h) {
    auto st = sm.step_of_rule.at(s.letter.symbol);
    if (st && (out.empty() || out.back() != *st)) out.push_back(*st);
  }
  return out;
}

}  // namespace smach
