#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "smach/engine.hpp"
#include "smach/transforms/historical.hpp"

namespace smach {

// Division machines D1..D5. Input configuration: s a^k s1 t1 b^l t' [t''].
inline SMachine make_division(int stage) {
  if (stage < 1 || stage > 5) throw std::invalid_argument("division stage must be 1..5");
  if (stage == 5) {
    SMachine d5 = add_historical_sectors(make_division(4));
    d5.name = "D5";
    return d5;
  }
  SMachine m;
  m.name = "D" + std::to_string(stage);
  const bool counting = stage >= 2;
  const bool phased = stage >= 3;
  auto& parts = m.hw.parts;
  parts = {{"S1", {"s"}}, {"S2", {"s1", "s2"}}, {"T1", {"t1"}}, {"T2", {"t'"}}};
  m.hw.tapes = {{"A", {"a"}}, {"A'", {"a'"}}, {"B", {"b"}}};
  if (counting) {
    parts.push_back({"T3", {"t''"}});
    m.hw.tapes.push_back({"C", {"c"}});
  }
  if (!phased) {
    parts[2].letters.push_back("t2");
  } else {
    for (const char* ph : {"_2", "_3"}) {
      parts[1].letters.push_back(std::string("s1") + ph);
      parts[1].letters.push_back(std::string("s2") + ph);
      parts[2].letters.push_back(std::string("t1") + ph);
      parts[3].letters.push_back(std::string("t'") + ph);
    }
    parts[1].letters.push_back("s1_f");
    parts[2].letters.push_back("t1_f");
    parts[3].letters.push_back("t'_f");
  }
  if (stage == 4) {
    parts[0].letters.push_back("s_0");
    parts[1].letters.push_back("s1_0");
    parts[2].letters.push_back("t1_0");
    parts[3].letters.push_back("t'_0");
    parts[4].letters.push_back("t''_0");
  }
  m.hw.index();

  const std::string tpp = counting ? "t''" : "";
  auto add = [&](const std::string& name, std::vector<std::pair<std::string, std::string>> p, std::set<std::size_t> locks) {
    if (!counting) p.resize(4);
    m.rules.push_back(make_rule(m, name, p, locks));
  };

  // phase letters: suffix "" for phase 1, "_2", "_3"
  auto phase_rules = [&](const std::string& sf, const std::string& rtag, int role) {
    // role 1: count b down, emit c; role 2: count c down, emit b; role 3: count b down only.
    std::string s1 = "s1" + sf, s2 = "s2" + sf, t1 = "t1" + sf, tp = "t'" + sf;
    std::string t1_count = role == 2 ? t1 : t1 + " b^-1";
    std::string tp_count = role == 2 ? tp + " c^-1" : tp;
    std::string t1_emit = role == 2 ? t1 + " b" : t1;
    std::string tp_emit = role == 1 && counting ? tp + " c" : tp;
    std::set<std::size_t> extra;
    if (role == 3) extra.insert(4);
    auto with = [&](std::set<std::size_t> l) {
      l.insert(extra.begin(), extra.end());
      return l;
    };
    add("t1" + rtag, {{"s", "s"}, {s1, "a^-1 " + s1 + " a'"}, {t1, t1_count}, {tp, tp_count}, {tpp, tpp}}, with({}));
    add("t12" + rtag, {{"s", "s"}, {s1, s2}, {t1, t1}, {tp, tp}, {tpp, tpp}}, with({1}));
    add("t2" + rtag, {{"s", "s"}, {s2, "a " + s2 + " a'^-1"}, {t1, t1_count}, {tp, tp_count}, {tpp, tpp}}, with({}));
    add("t21" + rtag, {{"s", "s"}, {s2, s1}, {t1, t1_emit}, {tp, tp_emit}, {tpp, tpp}}, with({2}));
  };

  if (!phased) {
    phase_rules("", "", 1);
    add("t3", {{"s", "s"}, {"s1", "s1"}, {"t1", "t2"}, {"t'", "t'"}, {tpp, tpp}}, {2, 3});
  } else {
    phase_rules("", "", 1);
    add("t3", {{"s", "s"}, {"s1", "s1_2"}, {"t1", "t1_2"}, {"t'", "t'_2"}, {tpp, tpp}}, {2, 3});
    phase_rules("_2", "#2", 2);
    add("t3#2", {{"s", "s"}, {"s1_2", "s1_3"}, {"t1_2", "t1_3"}, {"t'_2", "t'_3"}, {tpp, tpp}}, {2, 4});
    phase_rules("_3", "#3", 3);
    add("t3#3", {{"s", "s"}, {"s1_3", "s1_f"}, {"t1_3", "t1_f"}, {"t'_3", "t'_f"}, {tpp, tpp}}, {2, 3, 4});
  }
  if (stage == 4) {
    add("t", {{"s", "s a^-1"}, {"s1_f", "s1_f"}, {"t1_f", "t1_f"}, {"t'_f", "t'_f"}, {tpp, tpp}}, {2, 3, 4});
    add("t0", {{"s", "s_0"}, {"s1_f", "s1_0"}, {"t1_f", "t1_0"}, {"t'_f", "t'_0"}, {tpp, "t''_0"}}, {1, 2, 3, 4});
    m.accept = parse_word(m.hw, "s_0 s1_0 t1_0 t'_0 t''_0");
  }
  m.input = parse_word(m.hw, counting ? "s s1 t1 t' t''" : "s s1 t1 t'");
  m.input_sectors = {1, 3};
  m.finalize();
  return m;
}

// s a^k s1 t1 b^l t' [t'']
inline Word division_input(const SMachine& m, long long k, long long l) {
  Word a = Word::letter(m.hw.at("a")), b = Word::letter(m.hw.at("b"));
  return input_word(m, {power(a, k), power(b, l)});
}

}  // namespace smach
