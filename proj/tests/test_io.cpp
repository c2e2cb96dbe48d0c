#include <catch_amalgamated.hpp>

#include "smach/io.hpp"
#include "smach/lemmas.hpp"
#include "smach/library/biprimitive.hpp"
#include "smach/library/division.hpp"
#include "smach/library/primitive.hpp"
#include "smach/library/zmachine.hpp"
#include "smach/transforms/control.hpp"
#include "smach/transforms/historical.hpp"
#include "smach/transforms/normalize.hpp"

using namespace smach;

namespace {

std::string format_error(const json& j) {
  try {
    machine_from_json(j);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("machine JSON round trip", "[io]") {
  std::vector<SMachine> machines = {make_primitive(letters_spec(2)),
                                    make_primitive(letters_spec(3, Direction::Right)),
                                    make_z_machine(Direction::Left, {"a", "b"}),
                                    make_biprimitive(make_primitive(letters_spec(1))).machine,
                                    compose({letters_spec(2), letters_spec(1)}, ComposeMode::Sequential),
                                    compose({letters_spec(2), letters_spec(2)}, ComposeMode::Parallel),
                                    add_control_letters(make_division(1))};
  for (int s = 1; s <= 5; ++s) machines.push_back(make_division(s));
  std::mt19937_64 rng(71);
  for (int i = 0; i < 5; ++i) machines.push_back(add_historical_sectors(random_normalized_machine(rng)));
  for (const auto& m : machines) {
    INFO(m.name);
    const json j = machine_to_json(m);
    const SMachine back = machine_from_json(json::parse(j.dump()));
    CHECK(machine_to_json(back) == j);
    CHECK(back.rules.size() == m.rules.size());
    CHECK(bool(back.input) == bool(m.input));
  }
}

TEST_CASE("malformed machine files name the location", "[io]") {
  const json good = machine_to_json(make_division(1));
  CHECK(format_error(good).empty());
  CHECK(format_error(json::array()).rfind("$:", 0) == 0);

  json j = good;
  j["format"] = 7;
  CHECK(format_error(j).rfind("$.format", 0) == 0);

  j = good;
  j["rules"][2]["parts"][1][1] = "s1 nosuch";
  CHECK_THAT(format_error(j), Catch::Matchers::StartsWith("$.rules[2].parts[1]") && Catch::Matchers::ContainsSubstring("nosuch"));

  j = good;
  j["rules"][0]["parts"][0] = "s";
  CHECK_THAT(format_error(j), Catch::Matchers::StartsWith("$.rules[0].parts[0]"));

  j = good;
  j["rules"][0]["locks"] = {9};
  CHECK_THAT(format_error(j), Catch::Matchers::StartsWith("$.rules[0].locks"));

  j = good;
  j["rules"][0]["permit"] = {{"x", json::array()}};
  CHECK_THAT(format_error(j), Catch::Matchers::StartsWith("$.rules[0].permit"));

  j = good;
  j["tapes"][0]["letters"] = {1, 2};
  CHECK_THAT(format_error(j), Catch::Matchers::StartsWith("$.tapes[0].letters"));

  j = good;
  j["parts"][1]["letters"].push_back("s");  // duplicate letter name
  CHECK_THAT(format_error(j), Catch::Matchers::StartsWith("$.parts/$.tapes"));

  j = good;
  j.erase("parts");
  CHECK_THAT(format_error(j), Catch::Matchers::StartsWith("$.parts"));

  CHECK_THROWS_AS(read_machine("/nonexistent/machine.json"), FormatError);
}

TEST_CASE("trace lines", "[io]") {
  const SMachine d1 = make_division(1);
  const auto c = run_checked(d1, division_input(d1, 1, 2), parse_history(d1, "t1 t12 t2"));
  const std::string out = trace_jsonl(d1, c);
  std::istringstream in(out);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const json j = json::parse(line);
    CHECK(j["step"] == n);
    ++n;
  }
  CHECK(n == 4);
  CHECK(json::parse(out.substr(0, out.find('\n')))["word"] == "s a s1 t1 b b t'");
}
