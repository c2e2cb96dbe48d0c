#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "smach/designs.hpp"

using namespace smach;

namespace {

bool has(const std::vector<Violation>& v, const std::string& kind) {
  for (const auto& x : v)
    if (x.kind == kind) return true;
  return false;
}

Crossings random_crossings(std::mt19937_64& rng, std::size_t arcs, std::size_t chords) {
  Crossings x(arcs);
  for (auto& c : x) {
    std::vector<std::size_t> all(chords);
    for (std::size_t i = 0; i < chords; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(rng() % (chords + 1));
    c = all;
  }
  return x;
}

}  // namespace

TEST_CASE("validation examples", "[designs]") {
  CHECK(validate(Design{}).empty());

  Design crossing;
  crossing.chords = {{circle_point(0), circle_point(Rational(5, 2))}, {circle_point(Rational(1, 2)), circle_point(-1)}};
  CHECK(has(validate(crossing), "chords not disjoint"));

  Design off;
  off.chords = {{{Rational(1, 2), 0}, circle_point(1)}};
  CHECK(has(validate(off), "chord endpoint off the unit circle"));

  // a vertical chord x = 0 and an arc that comes up to it at a vertex and turns back
  Design touch;
  touch.chords = {{{0, 1}, {0, -1}}};
  touch.arcs = {{{Rational(-1, 2), Rational(1, 4)}, {0, 0}, {Rational(-1, 2), Rational(-1, 4)}}};
  CHECK(has(validate(touch), "non-transversal crossing"));

  Design through = touch;
  through.arcs = {{{Rational(-1, 2), Rational(1, 4)}, {0, 0}, {Rational(1, 2), Rational(-1, 4)}}};
  CHECK(validate(through).empty());
  CHECK(crossing_sequences(through) == Crossings{{0}});

  Design twice = touch;
  twice.arcs = {{{Rational(-1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 4)}, {Rational(-1, 2), 0}}};
  CHECK(has(validate(twice), "arc crosses a chord more than once"));

  Design endpoint = touch;
  endpoint.arcs = {{{Rational(-1, 2), 0}, {0, 0}}};
  CHECK(has(validate(endpoint), "arc endpoint on a chord"));

  Design outside;
  outside.arcs = {{{0, 0}, {1, 0}}};
  CHECK(has(validate(outside), "arc leaves the open disk"));

  Design clash;
  clash.arcs = {{{Rational(-1, 2), 0}, {Rational(1, 2), 0}}, {{0, Rational(-1, 2)}, {0, Rational(1, 2)}}};
  CHECK(has(validate(clash), "arcs not disjoint"));

  Design loop;
  loop.arcs = {{{0, 0}, {Rational(1, 2), 0}, {Rational(1, 4), Rational(1, 4)}, {Rational(1, 4), Rational(-1, 4)}}};
  CHECK(has(validate(loop), "arc not simple"));

  CHECK_THROWS_AS(crossing_sequences(crossing), std::invalid_argument);
}

TEST_CASE("arc of length 2 parallel to an arc of length 5", "[designs]") {
  const Design d = fixtures::two_in_five();
  REQUIRE(validate(d).empty());
  const Crossings x = crossing_sequences(d);
  CHECK(x[0].size() == 5);
  CHECK(x[1].size() == 2);
  CHECK(parallel(x, 1, 0));
  CHECK_FALSE(parallel(x, 0, 1));
  CHECK(parallel(x, 0, 0));
  CHECK(total_length(x) == 7);
}

TEST_CASE("validator agrees with an independent oracle", "[designs]") {
  const auto fx = fixtures::design_fixtures(120, 3);
  std::size_t valid = 0;
  for (const auto& d : fx) {
    const auto mine = validate(d);
    const auto ref = oracle::judge(d);
    REQUIRE(mine.empty() == ref.valid);
    if (!ref.valid) continue;
    ++valid;
    CHECK(crossing_sequences(d) == ref.crossings);
  }
  CHECK(valid > 20);
  CHECK(valid < fx.size());
}

TEST_CASE("property P agrees with tuple enumeration", "[designs]") {
  std::mt19937_64 rng(51);
  std::size_t violated = 0;
  for (int t = 0; t < 400; ++t) {
    const Crossings x = random_crossings(rng, 1 + rng() % 5, 1 + rng() % 6);
    const Rational lambda(static_cast<long long>(1 + rng() % 3), 4);
    const std::size_t n = 1 + rng() % 3;
    const PropertyResult r = check_property_P(x, lambda, n);
    CHECK(r.holds == oracle::property_P(x, lambda, n));
    if (r.holds) continue;
    ++violated;
    REQUIRE(r.witness.size() == n);
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(parallel(x, r.witness[i], r.witness[i + 1]));
    for (const auto& w : r.witness) CHECK(Rational(static_cast<long long>(w.length())) > (1 - lambda) * static_cast<long long>(x[w.arc].size()));
  }
  CHECK(violated > 0);
}

TEST_CASE("property P examples", "[designs]") {
  const Crossings same = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  CHECK_FALSE(check_property_P(same, Rational(1, 4), 3).holds);
  CHECK(check_property_P({{0, 1}}, Rational(1, 4), 2).holds);
  CHECK(check_property_P(same, Rational(1, 4), 4).holds);  // fewer arcs than n
  CHECK_THROWS_AS(check_property_P(same, Rational(1), 2), std::invalid_argument);
  CHECK_THROWS_AS(check_property_P(same, Rational(1, 2), 0), std::invalid_argument);
}

TEST_CASE("parallelism is transitive and subarcs are no longer than arcs", "[designs]") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 200; ++t) {
    const Crossings x = random_crossings(rng, 4, 6);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t c = 0; c < 4; ++c)
          if (parallel(x, a, b) && parallel(x, b, c)) CHECK(parallel(x, a, c));
    const std::size_t a = rng() % 4;
    const std::size_t lo = x[a].empty() ? 0 : rng() % x[a].size();
    const SubarcRef s{a, lo, lo + (x[a].size() - lo == 0 ? 0 : rng() % (x[a].size() - lo + 1))};
    CHECK(s.length() <= x[a].size());
    CHECK(parallel(x, s, SubarcRef::whole(x, a)));
  }
}

TEST_CASE("weights", "[designs]") {
  const Crossings x = {{0}, {1}, {1}, {1}, {1}, {1}, {1}, {1}};
  const Weights w = weights(x, 3, 3);
  CHECK(*w.nu[0] == 1);
  CHECK(*w.nu[1] == 5);
  CHECK_FALSE(w.nu[2]);
  CHECK(w.total == 6);
  CHECK(weights({}, 4, 3).total == 0);

  std::mt19937_64 rng(53);
  for (int t = 0; t < 300; ++t) {
    const std::size_t chords = 1 + rng() % 8, n = 1 + rng() % 4;
    const Crossings r = random_crossings(rng, rng() % 9, chords);
    const Weights v = weights(r, chords, n);
    CHECK(v.crossed_chords <= v.total);
    CHECK(v.total <= (2 * n - 1) * v.crossed_chords);
  }
}

TEST_CASE("ratio experiment is reproducible and keeps only valid P designs", "[designs]") {
  GeneratorParams g;
  g.max_chords = 8;
  const ExperimentReport a = ratio_experiment(g, Rational(1, 4), 3, 12, 77);
  const ExperimentReport b = ratio_experiment(g, Rational(1, 4), 3, 12, 77, 3);
  CHECK(a.csv() == b.csv());
  REQUIRE(a.max_ratio);
  CHECK(a.rows.size() + a.exhausted == 12);
  CHECK(a.csv().rfind("trial,chords,arcs,ell_Q,hash_T,ratio\n", 0) == 0);

  DesignRng rng(5);
  for (int t = 0; t < 10; ++t) {
    auto d = random_design(2 + t % 6, Rational(1, 4), 3, g, rng);
    REQUIRE(d);
    REQUIRE(validate(*d).empty());
    CHECK(check_property_P(crossing_sequences(*d), Rational(1, 4), 3).holds);
  }
}

TEST_CASE("one chord and one crossing arc gives ratio 1", "[designs]") {
  GeneratorParams g;
  g.min_chords = g.max_chords = 1;
  g.arcs_per_chord = 1;
  const ExperimentReport r = ratio_experiment(g, Rational(1, 4), 3, 1, 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].ratio == 1);
}

TEST_CASE("design JSON round trip", "[designs]") {
  const Design d = fixtures::two_in_five();
  const Design e = design_from_json(json::parse(design_to_json(d).dump()));
  CHECK(crossing_sequences(e) == crossing_sequences(d));
  CHECK(e.arcs[0] == d.arcs[0]);
  CHECK_THROWS_WITH(design_from_json(json::parse(R"({"chords": [[[0, 1]]]})")), Catch::Matchers::ContainsSubstring("chords[0]"));
  CHECK_THROWS_WITH(design_from_json(json::parse(R"({"arcs": [[["1/2", "x"]]]})")), Catch::Matchers::ContainsSubstring("arcs[0][0][1]"));
}
