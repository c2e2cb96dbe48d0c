// One line per acceptance criterion. Tolerances and time limits are fixed here;
// exit status 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "smach/designs.hpp"
#include "smach/engine.hpp"
#include "smach/lemmas.hpp"
#include "smach/library/biprimitive.hpp"
#include "smach/library/division.hpp"
#include "smach/library/primitive.hpp"
#include "smach/necklace.hpp"
#include "smach/presentation.hpp"
#include "smach/suitable.hpp"

using namespace smach;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CheckParams fuzz(std::size_t trials) {
  CheckParams p;
  p.trials = trials;
  p.seed = 20240601;
  return p;
}

// ---- 1 ------------------------------------------------------------------------------

Outcome worked_example() {
  SMachine m;
  m.hw.parts = {{"Q0", {"q0"}}, {"Q1", {"q1", "q1'"}}, {"Q2", {"q2", "q2'"}}, {"Q3", {"q3"}}};
  m.hw.tapes = {{"A", {"a"}}, {"B", {"b", "c"}}, {"D", {"d"}}};
  m.hw.index();
  m.rules.push_back(make_rule(m, "th", {{"q0", "q0"}, {"q1", "a q1' b^-1"}, {"q2", "c q2' d"}, {"q3", "q3"}}));
  m.finalize();
  const Word w = parse_word(m.hw, "q1 b q2 d q2^-1 q1^-1");
  const Sym th{rule_letter(0), 1};
  const std::string got = format_word(m, apply(m, th, w));
  const bool image = got == "q1' c q2' d q2'^-1 c^-1 b q1'^-1";
  SMachine locked = m, other = m;
  locked.rules[0].permit[2] = {0, 0};
  other.rules[0].permit[2] = {0, 1};  // only c
  const bool refused = !applicable(locked, th, w) && !applicable(other, th, w);
  return {image && refused, "image '" + got + "', empty and {c} sector alphabets refused: " + (refused ? "yes" : "no")};
}

// ---- 2..6 -----------------------------------------------------------------------------

Outcome from_report(const CheckReport& r, const std::string& extra = "") {
  std::string d = std::to_string(r.trials) + " cases, " + std::to_string(r.failure_count) + " violations";
  if (!r.failures.empty()) d += ", first: " + r.failures.front().dump();
  return {r.ok(), d + extra};
}

Outcome prim() { return from_report(check_prim_exhaustive(4, 12)); }
Outcome division() { return from_report(check_div({1, 2, 3}, 24, 120, 40)); }
Outcome division_cube() {
  const CheckReport r = check_div3(1, 20, 200, 40);
  return from_report(r, ", accepted l: " + r.stats["accepting_lengths"].dump());
}

Outcome historical_lemmas() {
  Outcome o{true, ""};
  for (const std::string id : {"w", "three", "nine"}) {
    const CheckReport r = run_check(id, fuzz(10000));
    o.pass = o.pass && r.ok() && r.trials == 10000;
    o.detail += id + " " + std::to_string(r.failure_count) + "/" + std::to_string(r.trials) + "  ";
  }
  return o;
}

Outcome general_lemmas() {
  Outcome o{true, ""};
  for (const std::string id : {"gen", "gen1", "gen2", "gen3"}) {
    const CheckReport r = run_check(id, fuzz(10000));
    o.pass = o.pass && r.ok() && r.trials == 10000;
    o.detail += id + " " + std::to_string(r.failure_count) + "/" + std::to_string(r.trials);
    if (id == "gen2") o.detail += " (factorizations " + r.stats.value("witness_found", json(0)).dump() + ")";
    o.detail += "  ";
  }
  return o;
}

// ---- 7 --------------------------------------------------------------------------------

constexpr double kBiprimitiveExponent = 2.0, kBiprimitiveTolerance = 0.15;
constexpr double kPrimitiveExponent = 1.0, kPrimitiveTolerance = 0.1;

Outcome biprimitive_slowdown() {
  const SMachine pr = make_primitive(letters_spec(2));
  const Biprimitive bp = make_biprimitive(pr);
  std::vector<double> xs, plain, lifted;
  for (std::size_t s = 2; s <= 20; ++s) {
    Word u;
    for (std::size_t i = 0; i < s; ++i) u.push({tape_letter(1, static_cast<std::uint32_t>(i % 2)), 1});
    const Word w0 = standard_word(state_letters(parse_word(pr.hw, "q1 p1 q2")), {u, {}});
    const Word h = primitive_canonical_history(pr, u, Direction::Left);
    const Computation c = bp_lift(bp, w0, h);
    if (!replays(bp.machine, c) || bp_project_history(bp, c.history) != h) return {false, "lift does not replay at s=" + std::to_string(s)};
    xs.push_back(std::log(static_cast<double>(s)));
    plain.push_back(std::log(static_cast<double>(h.size())));
    lifted.push_back(std::log(static_cast<double>(c.length())));
  }
  const double e_bp = slope(xs, lifted), e_pr = slope(xs, plain);
  const bool ok_bp = std::abs(e_bp - kBiprimitiveExponent) <= kBiprimitiveTolerance;
  const bool ok_pr = std::abs(e_pr - kPrimitiveExponent) <= kPrimitiveTolerance;
  // local slope at the top of the range, for comparison with the whole-range fit
  const double local = (lifted.back() - lifted[lifted.size() - 2]) / (xs.back() - xs[xs.size() - 2]);
  return {ok_bp && ok_pr, "biprimitive exponent " + fmt(e_bp) + " (want " + fmt(kBiprimitiveExponent, 2) + " +- " +
                              fmt(kBiprimitiveTolerance, 2) + "), primitive " + fmt(e_pr) + " (want " + fmt(kPrimitiveExponent, 2) +
                              " +- " + fmt(kPrimitiveTolerance, 2) + "), biprimitive local slope at s=20 " + fmt(local)};
}

// ---- 8 --------------------------------------------------------------------------------

Outcome mixture_laws() {
  const CheckReport r = check_mixture(fuzz(10000));
  std::string d = std::to_string(r.trials) + " necklaces; violations per clause:";
  for (const char* part : {"exhaustive", "fuzz"}) {
    d += std::string(" ") + part + " {";
    for (auto it = r.stats[part].begin(); it != r.stats[part].end(); ++it)
      d += " " + it.key() + ":" + it.value()["violations"].dump();
    d += " }";
  }
  if (r.stats["exhaustive"]["b.lower"].contains("first")) d += "; first b.lower counterexample " + r.stats["exhaustive"]["b.lower"]["first"].dump();
  d += "; b.corrected is mu <= 2J(n-1) + mu'";
  return {r.ok(), d};
}

// ---- 9 --------------------------------------------------------------------------------

Outcome modified_length_dp() {
  // one q-letter, two theta-letters, three a-letters
  const std::vector<Letter> letters = {{Kind::State, 0, 0}, {Kind::Rule, 0, 1}, {Kind::Rule, 0, 2},
                                       {Kind::Tape, 0, 3},  {Kind::Tape, 0, 4}, {Kind::Tape, 0, 5}};
  std::uint64_t words = 0, mismatches = 0;
  for (const Rational& delta : {Rational(1, 10), Rational(1, 100)}) {
    const LengthScale s(delta);
    for (std::size_t len = 0; len <= 8; ++len) {
      std::vector<std::size_t> digits(len, 0);
      while (true) {
        std::vector<Sym> w;
        for (auto d : digits) w.push_back({letters[d], 1});
        ++words;
        if (modified_length(Word(w), s) != modified_length_brute(w, s)) ++mismatches;
        std::size_t i = 0;
        while (i < len && ++digits[i] == letters.size()) digits[i++] = 0;
        if (i == len) break;
      }
    }
  }
  return {mismatches == 0, std::to_string(words) + " words, " + std::to_string(mismatches) + " mismatches"};
}

// ---- 10 -------------------------------------------------------------------------------

// Fan of k chords with up to `arcs` block arcs on separate lanes, no P filter.
Design unfiltered_design(std::size_t k, std::size_t arcs, std::mt19937_64& rng) {
  Design d;
  d.chords = random_fan(k, rng);
  const Rational spacing = Rational(13, 10) / static_cast<long long>(arcs + 1);
  for (std::size_t lane = 0; lane < arcs; ++lane) {
    const std::size_t first = rng() % k, last = first + rng() % (k - first);
    d.arcs.push_back(block_arc(d.chords, Rational(-13, 20) + spacing * static_cast<long long>(lane + 1), first, last));
  }
  return d;
}

Outcome designs() {
  std::size_t disagree = 0, fixtures_valid = 0;
  const auto fx = fixtures::design_fixtures(200, 20240601);
  for (const auto& d : fx) {
    const auto ref = oracle::judge(d);
    const bool mine = validate(d).empty();
    if (mine != ref.valid || (mine && crossing_sequences(d) != ref.crossings)) ++disagree;
    fixtures_valid += ref.valid;
  }

  std::mt19937_64 rng(20240601);
  std::size_t p_cases = 0, p_disagree = 0, p_violated = 0;
  for (int t = 0; t < 300; ++t) {
    const Design d = unfiltered_design(1 + rng() % 6, 1 + rng() % 5, rng);
    if (!validate(d).empty()) continue;
    const Crossings x = crossing_sequences(d);
    for (const Rational& lambda : {Rational(1, 4), Rational(1, 2), Rational(3, 4)})
      for (std::size_t n = 1; n <= 3; ++n) {
        ++p_cases;
        const bool mine = check_property_P(x, lambda, n).holds;
        p_disagree += mine != oracle::property_P(x, lambda, n);
        p_violated += !mine;
      }
  }

  std::size_t sandwich = 0, generated = 0;
  GeneratorParams g;
  DesignRng drng(20240601);
  for (int t = 0; t < 100; ++t) {
    auto d = random_design(g.min_chords + t % (g.max_chords - g.min_chords + 1), Rational(1, 4), 3, g, drng);
    if (!d) continue;
    ++generated;
    const Weights w = weights(crossing_sequences(*d), d->chords.size(), 3);
    sandwich += !(w.crossed_chords <= w.total && w.total <= 5 * w.crossed_chords);
  }

  const ExperimentReport a = ratio_experiment(g, Rational(1, 4), 3, 100, 20240601);
  const ExperimentReport b = ratio_experiment(g, Rational(1, 4), 3, 100, 20240601, 2);
  const bool finite = a.max_ratio.has_value() && !a.rows.empty();
  const bool same = a.csv() == b.csv();
  const bool pass = disagree == 0 && p_disagree == 0 && sandwich == 0 && finite && same;
  return {pass, "validator/oracle disagreements " + std::to_string(disagree) + "/200 (" + std::to_string(fixtures_valid) +
                    " valid); P/enumeration disagreements " + std::to_string(p_disagree) + "/" + std::to_string(p_cases) + " (" +
                    std::to_string(p_violated) + " violated); weight sandwich failures " + std::to_string(sandwich) + "/" +
                    std::to_string(generated) + "; max ratio " + (finite ? a.max_ratio->str() : std::string("none")) + " over " +
                    std::to_string(a.rows.size()) + " designs (" + std::to_string(a.exhausted) + " exhausted), reproducible " +
                    (same ? "yes" : "no")};
}

// ---- 11 -------------------------------------------------------------------------------

constexpr double kSuitableExponent = 1.0 / 6, kSuitableTolerance = 0.03;

Outcome suitable() {
  const AlphaSpec a(Rational(5, 2));
  const double e = fitted_exponent(a, 10, 20);
  const bool exp_ok = std::abs(e - kSuitableExponent) <= kSuitableTolerance;
  const SuitableReport s = check_suitable(pipeline_table(a, 100000));
  std::mt19937_64 rng(20240601);
  std::size_t dx_fail = 0;
  for (int t = 0; t < 1000; ++t) {
    const FunctionTable g = random_monotone_table(100 + rng() % 400, rng);
    std::vector<std::pair<std::size_t, std::size_t>> samples;
    for (int k = 0; k < 100; ++k) {
      const std::size_t x = 1 + rng() % g.n_max();
      samples.push_back({x, rng() % x});
    }
    dx_fail += !check_dx(g, samples).pass();
  }
  return {exp_ok && s.pass() && dx_fail == 0,
          "exponent over [2^10, 2^20] " + fmt(e) + " (want " + fmt(kSuitableExponent) + " +- " + fmt(kSuitableTolerance, 2) +
              "; f is constant 5 there since beta_m = 0 while m <= 2), exponent over [2^256, 2^512] " +
              fmt(fitted_exponent(a, 256, 512, 1)) + ", over [2^1000, 2^2000] " + fmt(fitted_exponent(a, 1000, 2000, 1)) + "; check_suitable " + (s.pass() ? "pass" : "fail") + "; check_dx failures " +
              std::to_string(dx_fail) + "/1000"};
}

// ---- 12 -------------------------------------------------------------------------------

Outcome presentation() {
  std::mt19937_64 rng(20240601);
  const std::vector<SMachine> ms = {make_primitive(letters_spec(2)), make_division(1), random_normalized_machine(rng, 3, 6)};
  std::string d;
  bool pass = true;
  for (const auto& m : ms) {
    const Presentation p = emit_presentation(m, 0);
    bool reduced = true;
    for (const auto& r : p.relators) reduced = reduced && is_cyclically_reduced(r) && r == reduce(std::vector<Sym>(r.begin(), r.end()));
    const std::size_t want = presentation_count_formula(m, false);
    pass = pass && reduced && p.relation_count() == want;
    d += m.name + " " + std::to_string(p.relation_count()) + "/" + std::to_string(want) + (reduced ? "" : " (unreduced relator)") + "  ";
  }
  return {pass, d};
}

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "worked example", 0.001, worked_example},
      {2, "prim exhaustive", 60, prim},
      {3, "div", 300, division},
      {4, "div3", 600, division_cube},
      {5, "w / three / nine", 120, historical_lemmas},
      {6, "gen / gen1 / gen2 / gen3", 120, general_lemmas},
      {7, "biprimitive slowdown", 60, biprimitive_slowdown},
      {8, "mixture", 60, mixture_laws},
      {9, "modified length", 120, modified_length_dp},
      {10, "designs", 300, designs},
      {11, "suitable pipeline", 120, suitable},
      {12, "presentation", 1, presentation},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.4f s, limit %g s%s]\n", pass ? "PASS" : "FAIL", c.number, c.name.c_str(), o.detail.c_str(), secs,
                c.limit_seconds, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, all.size());
  return failed == 0 ? 0 : 1;
}
