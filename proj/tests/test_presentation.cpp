#include <catch_amalgamated.hpp>

#include <random>

#include "smach/lemmas.hpp"
#include "smach/library/division.hpp"
#include "smach/library/primitive.hpp"
#include "smach/presentation.hpp"

using namespace smach;

namespace {

Word mixed(const std::string& text) {
  static std::vector<std::string> names;
  return parse_mixed_word(text, &names);
}

void check_relators(const Presentation& p) {
  for (const auto& r : p.relators) {
    CHECK(is_cyclically_reduced(r));
    CHECK(r.size() >= 4);
  }
}

}  // namespace

TEST_CASE("one rule, two parts, three letters gives five relators", "[presentation]") {
  SMachine m;
  m.hw.parts = {{"Q0", {"q0"}}, {"Q1", {"q1", "q1'"}}};
  m.hw.tapes = {{"A", {"a", "b", "c"}}};
  m.hw.index();
  m.rules.push_back(make_rule(m, "th", {{"q0", "q0"}, {"q1", "q1'"}}));
  m.finalize();
  const Presentation p = emit_presentation(m, 0);
  CHECK(p.relation_count() == 5);
  CHECK(presentation_count_formula(m, false) == 5);
  CHECK(p.theta_letters.size() == 3);
  CHECK_FALSE(p.hub);
  check_relators(p);
}

TEST_CASE("relation counts match the closed formula", "[presentation]") {
  std::mt19937_64 rng(31);
  std::vector<SMachine> machines = {make_primitive(letters_spec(1)), make_primitive(letters_spec(3)), make_division(1),
                                    make_division(3)};
  for (int i = 0; i < 20; ++i) machines.push_back(random_normalized_machine(rng, 2 + rng() % 3, 2 + rng() % 5));
  for (const auto& m : machines) {
    const Presentation p = emit_presentation(m, 0);
    CHECK(p.relation_count() == presentation_count_formula(m, false));
    check_relators(p);
  }
}

TEST_CASE("hub relator", "[presentation]") {
  const SMachine d4 = make_division(4);
  REQUIRE(d4.accept);
  const Presentation acc = emit_presentation(d4, 1, *d4.accept);
  REQUIRE(acc.hub);
  CHECK(*acc.hub == *d4.accept);
  CHECK(acc.relation_count() == presentation_count_formula(d4, true));

  const SMachine pr = make_primitive(letters_spec(2));
  const Word hub = parse_word(pr.hw, "q1 p2 q2");
  const Presentation one = emit_presentation(pr, 1, hub);
  CHECK(one.copies == pr.N() + 1);
  // the last part's right theta letter wraps around to copy 0
  for (const auto& r : one.relators)
    for (const auto& s : r)
      if (s.letter.kind == Kind::Rule) CHECK(s.letter.alphabet <= pr.N());

  const Presentation seven = emit_presentation(pr, 7, hub);
  CHECK(seven.hub->size() == 7 * hub.size());
  CHECK_THROWS_AS(emit_presentation(pr, 0, hub), std::invalid_argument);
  CHECK_THROWS_AS(emit_presentation(pr, 1, parse_word(pr.hw, "q1 q2")), std::invalid_argument);
}

TEST_CASE("presentation JSON lists generators and relators", "[presentation]") {
  const SMachine pr = make_primitive(letters_spec(1));
  const Presentation p = emit_presentation(pr, 2, parse_word(pr.hw, "q1 p1 q2"));
  const json j = presentation_to_json(pr, p);
  CHECK(j["relators"].size() == p.relators.size());
  CHECK(j["generators"]["theta"].size() == p.theta_letters.size());
  CHECK(j.contains("hub"));
}

TEST_CASE("modified length examples", "[presentation]") {
  const LengthScale hundredth(Rational(1, 100));
  CHECK(modified_length(mixed("q1"), hundredth) == 1);
  CHECK(modified_length(mixed("theta a"), hundredth) == 1);
  CHECK(modified_length(mixed("a theta"), hundredth) == 1);
  CHECK(modified_length(mixed("a"), hundredth) == Rational(1, 100));
  CHECK(modified_length(mixed("a theta b"), hundredth) == Rational(101, 100));
  CHECK(modified_length(mixed("q1 a"), hundredth) == Rational(101, 100));
  CHECK(modified_length(Word{}, hundredth) == 0);
  CHECK_THROWS_AS(LengthScale(Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(LengthScale(Rational(1, 2), 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
}

TEST_CASE("band length bounds", "[presentation]") {
  CHECK(band_length_bounds(0, 5) == std::make_pair(5LL, 5LL));
  CHECK(band_length_bounds(2, 0) == std::make_pair(0LL, 6LL));
  CHECK(band_length_bounds(3, 10) == std::make_pair(7LL, 19LL));
  CHECK_THROWS_AS(band_length_bounds(-1, 2), std::invalid_argument);
}

TEST_CASE("modified length: DP, lower bounds, syllable blocks, additivity", "[presentation]") {
  std::mt19937_64 rng(32);
  const std::vector<Letter> letters = {{Kind::State, 0, 0}, {Kind::Rule, 0, 1}, {Kind::Rule, 0, 2},
                                       {Kind::Tape, 0, 3},  {Kind::Tape, 0, 4}, {Kind::Tape, 0, 5}};
  for (const Rational& delta : {Rational(1, 10), Rational(1, 100), Rational(1, 7)}) {
    const LengthScale s(delta, 3);
    for (int t = 0; t < 2000; ++t) {
      const Word w = random_reduced(letters, rng() % 13, rng);
      const std::vector<Sym> syms(w.begin(), w.end());
      const Rational len = modified_length(w, s);
      CHECK(len == modified_length_brute(syms, s));
      long long c = 0, d = 0;
      for (const auto& x : w) {
        c += x.letter.kind == Kind::Rule;
        d += x.letter.kind == Kind::Tape;
      }
      const Rational floor_c(c);
      CHECK(len >= floor_c);
      CHECK(len >= floor_c + Rational(d - c) * delta);
      CHECK(subword_additivity_check(w, s));
    }
    // c blocks theta, theta a, a theta (distinct letters so nothing cancels) have length c
    for (int t = 0; t < 500; ++t) {
      Word w;
      const long long c = 1 + static_cast<long long>(rng() % 6);
      for (long long b = 0; b < c; ++b) {
        const Sym th{letters[1 + rng() % 2], 1}, a{letters[3 + rng() % 3], rng() % 2 ? 1 : -1};
        switch (rng() % 3) {
          case 0: w.push(th); break;
          case 1: w.push(th); w.push(a); break;
          default: w.push(a); w.push(th); break;
        }
      }
      bool clean = w.size() > 0;  // reduction may have merged blocks
      for (std::size_t i = 0; i + 1 < w.size(); ++i) clean = clean && !(w[i].letter.kind == Kind::Tape && w[i + 1].letter.kind == Kind::Tape);
      std::size_t thetas = 0;
      for (const auto& x : w) thetas += x.letter.kind == Kind::Rule;
      if (clean && thetas == static_cast<std::size_t>(c)) CHECK(modified_length(w, s) == c);
    }
  }
}

TEST_CASE("theta a split between the letters", "[presentation]") {
  const LengthScale s(Rational(1, 10));
  const Word w = mixed("theta a");
  CHECK(modified_length(w, s) == 1);
  CHECK(modified_length(w.sub(0, 1), s) + modified_length(w.sub(1, 2), s) == Rational(11, 10));
  CHECK(subword_additivity_check(w, s));
}
