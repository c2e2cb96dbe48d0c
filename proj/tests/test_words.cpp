#include <catch_amalgamated.hpp>

#include <random>

#include "smach/word.hpp"
#include "test_util.hpp"

using namespace smach;

namespace {
const Letter a = tape_letter(1, 0), b = tape_letter(1, 1);
}

TEST_CASE("reduce cancels adjacent inverse pairs", "[words]") {
  CHECK(reduce({{a, 1}, {a, -1}}).empty());
  CHECK(reduce({}).empty());
  CHECK(reduce({{a, 1}, {b, 1}, {b, -1}, {a, 1}}) == Word({{a, 1}, {a, 1}}));
  CHECK(reduce({{a, -1}, {b, 1}, {b, -1}, {a, 1}}).empty());
}

TEST_CASE("invert reverses and flips signs", "[words]") {
  CHECK(invert(Word{}).empty());
  CHECK(invert(Word({{a, 1}, {b, -1}})) == Word({{b, 1}, {a, -1}}));
}

TEST_CASE("reduce and invert properties on random words", "[words]") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Sym> raw = testutil::random_syms(rng, 4, 20);
    Word w = reduce(raw);
    CHECK(Word(w.syms()) == w);  // idempotent
    CHECK(w.size() <= raw.size());
    CHECK((w * invert(w)).empty());
    CHECK(invert(invert(w)) == w);
    Word v = reduce(testutil::random_syms(rng, 4, 20));
    std::size_t uv = (w * v).size();
    CHECK(uv <= w.size() + v.size());
    CHECK(uv >= (w.size() > v.size() ? w.size() - v.size() : v.size() - w.size()));
  }
}

TEST_CASE("copy_word renames letter by letter", "[words]") {
  const Letter a2 = tape_letter(2, 0), b2 = tape_letter(2, 1);
  std::map<Letter, Letter> ren{{a, a2}, {b, b2}}, back{{a2, a}, {b2, b}};
  CHECK(copy_word(Word({{a, 1}, {b, 1}, {a, 1}}), ren) == Word({{a2, 1}, {b2, 1}, {a2, 1}}));
  CHECK(copy_word(Word{}, ren).empty());
  CHECK_THROWS_AS(copy_word(Word({{tape_letter(3, 0), 1}}), ren), std::invalid_argument);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    Word w = reduce(testutil::random_syms(rng, 2, 15));
    CHECK(copy_word(copy_word(w, ren), back) == w);
  }
}
