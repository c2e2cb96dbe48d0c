#include <catch_amalgamated.hpp>

#include <random>

#include "smach/engine.hpp"
#include "smach/fast.hpp"
#include "smach/lemmas.hpp"
#include "smach/library/division.hpp"
#include "smach/library/primitive.hpp"

using namespace smach;

namespace {

// Four parts, rule th: q1 -> a q1' b^-1, q2 -> c q2' d.
SMachine example_machine() {
  SMachine m;
  m.name = "example";
  m.hw.parts = {{"Q0", {"q0"}}, {"Q1", {"q1", "q1'"}}, {"Q2", {"q2", "q2'"}}, {"Q3", {"q3"}}};
  m.hw.tapes = {{"A", {"a"}}, {"B", {"b", "c"}}, {"D", {"d"}}};
  m.hw.index();
  m.rules.push_back(make_rule(m, "th", {{"q0", "q0"}, {"q1", "a q1' b^-1"}, {"q2", "c q2' d"}, {"q3", "q3"}}));
  m.finalize();
  return m;
}

const std::string kExampleWord = "q1 b q2 d q2^-1 q1^-1";

}  // namespace

TEST_CASE("worked example: application, trimming and reduction", "[engine]") {
  const SMachine m = example_machine();
  const Word w = parse_word(m.hw, kExampleWord);
  REQUIRE(is_admissible(m.hw, w));
  const Sym th{rule_letter(0), 1};
  REQUIRE(applicable(m, th, w));
  CHECK(format_word(m, apply(m, th, w)) == "q1' c q2' d q2'^-1 c^-1 b q1'^-1");
  CHECK(apply(m, th.inverse(), apply(m, th, w)) == w);
}

TEST_CASE("worked example: locked or restricted middle sector", "[engine]") {
  SMachine locked = example_machine();
  // Y_2 empty; finalize() would reject the rule for writing into a locked
  // sector, applicability alone already refuses the word
  locked.rules[0].permit[2] = {0, 0};
  CHECK_FALSE(applicable(locked, {rule_letter(0), 1}, parse_word(locked.hw, kExampleWord)));

  SMachine narrow = example_machine();
  narrow.rules[0].permit[2] = {0, 1};  // Y_2 = {c}, and the sector holds b
  narrow.finalize();
  const auto r = apply_rule(narrow, {rule_letter(0), 1}, parse_word(narrow.hw, kExampleWord));
  CHECK_FALSE(r.word.has_value());
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("bases of admissible words", "[engine]") {
  const SMachine m = example_machine();
  const auto b = base_of(parse_word(m.hw, kExampleWord));
  REQUIRE(b.size() == 4);
  CHECK(b[0].part == 1);
  CHECK(b[1].part == 2);
  CHECK(b[2].sign == -1);
  CHECK(is_standard_base(m, base_of(parse_word(m.hw, "q0 a q1 b q2 d q3"))));
  CHECK_FALSE(is_admissible(m.hw, parse_word(m.hw, "q0 b q1")));  // b is not in the Q0Q1 alphabet
}

TEST_CASE("run stops at the first inapplicable rule", "[engine]") {
  const SMachine d1 = make_division(1);
  const Word w0 = parse_word(d1.hw, "s a s1 t1 b b t'");
  const auto ok = run(d1, w0, parse_history(d1, "t1 t12 t2 t21 t3"));
  REQUIRE(ok.ok());
  CHECK(format_word(d1, ok.comp.end()) == "s a s1 t2 t'");
  CHECK(run(d1, w0, {}).comp.trace.size() == 1);

  const auto bad = run(d1, w0, parse_history(d1, "t1 t3"));
  REQUIRE_FALSE(bad.ok());
  CHECK(*bad.failed_at == 1);
  CHECK(bad.comp.length() == 1);
}

TEST_CASE("canonical computation of Pr on q1 a b p1 q2", "[engine]") {
  const SMachine pr = make_primitive(letters_spec(2));
  const Word u = parse_word(pr.hw, "a b");
  const Word h = primitive_canonical_history(pr, u, Direction::Left);
  CHECK(h.size() == 5);
  const auto c = run_checked(pr, standard_word(state_letters(parse_word(pr.hw, "q1 p1 q2")), {u, {}}), h);
  CHECK(format_word(pr, c.end()) == "q1 a b p2 q2");
}

TEST_CASE("inverse rule undoes every application", "[engine]") {
  std::mt19937_64 rng(3);
  const SMachine d1 = make_division(1);
  const auto letters = d1.rule_letters();
  int applied = 0;
  for (int t = 0; t < 1000; ++t) {
    const Word w = division_input(d1, 1 + static_cast<long long>(rng() % 3), static_cast<long long>(rng() % 9) - 4);
    const Computation c = fuzz_from(d1, w, 1 + rng() % 12, rng);
    for (std::size_t i = 0; i < c.length(); ++i) {
      CHECK(apply(d1, c.history[i].inverse(), c.trace[i + 1]) == c.trace[i]);
      ++applied;
    }
  }
  CHECK(applied > 1000);
}

TEST_CASE("breadth-first search finds shortest histories", "[engine]") {
  const SMachine d1 = make_division(1);
  const Word w0 = parse_word(d1.hw, "s a s1 t1 b b t'");
  const Word target = parse_word(d1.hw, "s a s1 t2 t'");
  SearchLimits lim;
  lim.max_depth = 10;
  lim.max_a_length = 10;
  const auto r = search_computations(d1, w0, [&](const Word& w) { return w == target; }, lim);
  REQUIRE(r.history);
  CHECK(r.history->size() == 5);
  CHECK(run_checked(d1, w0, *r.history).end() == target);

  lim.max_depth = 4;
  CHECK_FALSE(search_computations(d1, w0, [&](const Word& w) { return w == target; }, lim).history);
}

TEST_CASE("in-place runner agrees with rule application", "[engine]") {
  std::mt19937_64 rng(17);
  for (const SMachine& m : {make_primitive(letters_spec(2)), make_primitive(letters_spec(3, Direction::Right))}) {
    FastRunner fast(m);
    const auto letters = m.rule_letters();
    for (int t = 0; t < 300; ++t) {
      Word u = random_reduced(tape_letters(m.hw, 1), rng() % 5, rng);
      Word w = standard_word(state_letters(parse_word(m.hw, "q1 p1 q2")), {u, {}});
      fast.load(w);
      std::vector<Word> stack{w};
      for (int step = 0; step < 20; ++step) {
        const std::size_t i = rng() % letters.size();
        const auto r = apply_rule(m, letters[i], stack.back());
        const bool moved = fast.apply(i);
        REQUIRE(moved == r.word.has_value());
        if (!moved) continue;
        stack.push_back(*r.word);
        CHECK(fast.word() == stack.back());
        CHECK(fast.a_length() == a_length(stack.back()));
        if (rng() % 4 == 0) {
          fast.undo();
          stack.pop_back();
          CHECK(fast.word() == stack.back());
        }
      }
    }
  }
}
