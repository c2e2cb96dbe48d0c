// smach: command-line front end for the S-machine toolkit.
//
// Exit codes: 0 success or pass, 1 a check failed, 2 usage error or malformed input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smach/designs.hpp"
#include "smach/engine.hpp"
#include "smach/io.hpp"
#include "smach/lemmas.hpp"
#include "smach/library/biprimitive.hpp"
#include "smach/library/division.hpp"
#include "smach/library/primitive.hpp"
#include "smach/library/zmachine.hpp"
#include "smach/necklace.hpp"
#include "smach/presentation.hpp"
#include "smach/suitable.hpp"
#include "smach/transforms/control.hpp"
#include "smach/transforms/historical.hpp"
#include "smach/transforms/normalize.hpp"
#include "smach/transforms/stepgraph.hpp"

using namespace smach;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

std::string read_text(const std::string& path) {
  if (path == "-") return slurp(std::cin);
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  return slurp(in);
}

json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(where + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

// "-" reads the machine JSON from stdin.
SMachine load_machine(const std::string& path) {
  if (path.empty()) throw UsageError("--machine is required");
  if (path != "-") return read_machine(path);
  json j = parse_json_text(read_text("-"), "<stdin>");
  try {
    return machine_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(std::string("<stdin>: ") + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError(path + ": cannot write");
  out << text;
}

std::vector<std::string> alphabet_of(const std::string& letters, std::size_t size) {
  if (!letters.empty()) return split_tokens(letters);
  return letters_spec(size).alphabet;
}

Direction direction_of(const std::string& d) {
  if (d == "left") return Direction::Left;
  if (d == "right") return Direction::Right;
  throw UsageError("direction must be left or right, got '" + d + "'");
}

// ---- make ------------------------------------------------------------------------

struct MakeArgs {
  std::string kind, letters, direction = "left", source, out;
  std::size_t size = 2;
};

SMachine make_machine(const MakeArgs& a) {
  const auto alphabet = alphabet_of(a.letters, a.size);
  if (a.kind == "pr" || a.kind == "pr-star") {
    PrimitiveSpec s;
    s.alphabet = alphabet;
    s.direction = a.kind == "pr" ? Direction::Left : Direction::Right;
    return make_primitive(s);
  }
  if (a.kind.size() == 2 && a.kind[0] == 'd' && a.kind[1] >= '1' && a.kind[1] <= '5') return make_division(a.kind[1] - '0');
  if (a.kind == "z") return make_z_machine(direction_of(a.direction), alphabet);
  if (a.kind == "biprimitive") {
    SMachine src = a.source.empty() ? make_primitive(letters_spec(a.size)) : load_machine(a.source);
    return make_biprimitive(src).machine;
  }
  throw UsageError("unknown machine '" + a.kind + "' (expected pr, pr-star, d1..d5, z or biprimitive)");
}

// ---- transform --------------------------------------------------------------------

struct TransformArgs {
  std::string kind, machine, graph, mode = "parallel", direction = "left", out;
  std::vector<std::string> alphabets;
  bool property3 = false;
};

StepGraph read_step_graph(const std::string& path) {
  const json j = parse_json_text(read_text(path), path);
  StepGraph g;
  try {
    const auto& steps = j.at("steps");
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const std::string where = path + ": $.steps[" + std::to_string(i) + "]";
      const auto& s = steps[i];
      Step st;
      st.name = s.value("name", "step" + std::to_string(i));
      try {
        st.machine = machine_from_json(s.at("machine"));
      } catch (const FormatError& e) {
        throw FormatError(where + ".machine: " + e.what());
      }
      st.entry = s.at("entry").get<std::vector<std::string>>();
      st.exit = s.at("exit").get<std::vector<std::string>>();
      g.steps.push_back(std::move(st));
    }
    for (const auto& e : j.at("edges")) g.edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return g;
}

SMachine transform_machine(const TransformArgs& a) {
  if (a.kind == "normalize") return normalize(load_machine(a.machine), a.property3).machine;
  if (a.kind == "historical") return add_historical_sectors(load_machine(a.machine));
  if (a.kind == "control") return add_control_letters(load_machine(a.machine));
  if (a.kind == "compose") {
    if (a.alphabets.empty()) throw UsageError("compose needs at least one --alphabet");
    std::vector<PrimitiveSpec> specs;
    for (const auto& al : a.alphabets) specs.push_back({split_tokens(al), direction_of(a.direction)});
    if (a.mode != "parallel" && a.mode != "sequential") throw UsageError("--mode must be parallel or sequential");
    return compose(specs, a.mode == "parallel" ? ComposeMode::Parallel : ComposeMode::Sequential);
  }
  if (a.kind == "stepgraph") {
    if (a.graph.empty()) throw UsageError("stepgraph needs --graph FILE");
    return build_step_graph(read_step_graph(a.graph)).machine;
  }
  throw UsageError("unknown transform '" + a.kind + "' (expected normalize, historical, control, compose or stepgraph)");
}

// ---- run / search ---------------------------------------------------------------------

struct RunArgs {
  std::string machine, word, history;
};

int cmd_run(const RunArgs& a) {
  const SMachine m = load_machine(a.machine);
  const Word w0 = parse_word(m.hw, a.word);
  const Word h = parse_history(m, a.history);
  const RunResult r = run(m, w0, h);
  std::cout << trace_jsonl(m, r.comp);
  if (!r.ok()) {
    std::cerr << "smach run: history letter " << *r.failed_at + 1 << ": " << r.error << '\n';
    return kCheckFailed;
  }
  return kOk;
}

struct SearchArgs {
  std::string machine, word, target;
  SearchLimits limits;
};

int cmd_search(const SearchArgs& a) {
  const SMachine m = load_machine(a.machine);
  const Word w0 = parse_word(m.hw, a.word);
  const Word target = parse_word(m.hw, a.target);
  const SearchResult r = search_computations(m, w0, [&](const Word& w) { return w == target; }, a.limits);
  json out = {{"found", r.history.has_value()}, {"explored", r.explored}, {"truncated", r.truncated}};
  if (r.history) {
    out["history"] = format_word(m, *r.history);
    out["length"] = r.history->size();
  }
  std::cout << out.dump() << '\n';
  return r.history ? kOk : kCheckFailed;
}

// ---- presentation / length ------------------------------------------------------------------

struct PresentationArgs {
  std::string machine, hub, out;
  long long L = 1;
};

int cmd_presentation(const PresentationArgs& a) {
  const SMachine m = load_machine(a.machine);
  std::optional<Word> hub;
  if (!a.hub.empty()) {
    std::string text = read_text(a.hub);
    try {
      hub = parse_word(m.hw, text);
    } catch (const std::invalid_argument& e) {
      throw FormatError(a.hub + ": " + e.what());
    }
  }
  const Presentation p = emit_presentation(m, a.L, hub);
  json j = presentation_to_json(m, p);
  j["relation_count"] = p.relation_count();
  write_output(a.out, j.dump(2) + "\n");
  return kOk;
}

struct LengthArgs {
  std::string machine, word, delta = "1/10";
  long long J = 1;
};

int cmd_length(const LengthArgs& a) {
  const LengthScale scale(parse_rational(a.delta), a.J);
  Word w;
  if (!a.machine.empty()) {
    // theta letters of a machine are written with their rule names
    const SMachine m = load_machine(a.machine);
    for (const auto& tok : split_tokens(a.word)) {
      auto [n, sign] = split_sign(tok);
      if (auto k = m.rule_index(n)) w.push({rule_letter(static_cast<std::uint32_t>(*k)), sign});
      else w.push({m.hw.at(n), sign});
    }
  } else {
    w = parse_mixed_word(a.word);
  }
  std::cout << modified_length(w, scale).str() << '\n';
  return kOk;
}

// ---- designs ----------------------------------------------------------------------------

struct DesignArgs {
  std::string file, lambda = "1/4", out;
  std::size_t n = 3, trials = 100, min_chords = 2, max_chords = 16;
};

Design load_design(const std::string& path) {
  const json j = parse_json_text(read_text(path), path);
  try {
    return design_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw FormatError(path + ": " + e.what());
  }
}

int cmd_design_validate(const DesignArgs& a) {
  const auto v = validate(load_design(a.file));
  for (const auto& x : v) std::cout << x.message() << '\n';
  if (v.empty()) std::cout << "valid\n";
  return v.empty() ? kOk : kCheckFailed;
}

json subarc_json(const SubarcRef& s) { return {{"arc", s.arc}, {"begin", s.begin}, {"end", s.end}}; }

int cmd_design_check_p(const DesignArgs& a) {
  const Design d = load_design(a.file);
  const auto v = validate(d);
  if (!v.empty()) throw FormatError(a.file + ": invalid design: " + v.front().message());
  const auto x = crossing_sequences(d);
  const auto r = check_property_P(x, parse_rational(a.lambda), a.n);
  const auto w = weights(x, d.chords.size(), a.n);
  json out = {{"holds", r.holds}, {"ell_Q", total_length(x)}, {"hash_T", d.chords.size()}, {"nu_total", w.total}};
  json witness = json::array();
  for (const auto& s : r.witness) witness.push_back(subarc_json(s));
  if (!r.holds) out["witness"] = witness;
  std::cout << out.dump() << '\n';
  return r.holds ? kOk : kCheckFailed;
}

int cmd_design_experiment(const DesignArgs& a, const Globals& g) {
  GeneratorParams gp;
  gp.min_chords = a.min_chords;
  gp.max_chords = a.max_chords;
  const auto rep = ratio_experiment(gp, parse_rational(a.lambda), a.n, a.trials, g.seed, g.jobs);
  write_output(a.out, rep.csv());
  std::cerr << "max ratio " << (rep.max_ratio ? rep.max_ratio->str() : std::string("none")) << ", generator exhausted in "
            << rep.exhausted << " of " << a.trials << " trials\n";
  return rep.rows.empty() ? kCheckFailed : kOk;
}

// ---- suitable / check ---------------------------------------------------------------------

struct SuitableArgs {
  std::string alpha = "5/2", report;
  std::size_t nmax = 100000;
};

int cmd_suitable(const SuitableArgs& a) {
  const AlphaSpec spec(parse_rational(a.alpha));
  const auto table = pipeline_table(spec, a.nmax);
  const auto rep = check_suitable(table);
  json j = rep.to_json();
  j["alpha"] = spec.alpha.str();
  j["beta"] = spec.beta.str();
  j["nmax"] = a.nmax;
  j["f_nmax"] = table.at(a.nmax).str();
  write_output(a.report, j.dump(2) + "\n");
  return rep.pass() ? kOk : kCheckFailed;
}

struct CheckArgs {
  std::string id, report;
  std::size_t trials = 10000;
  std::optional<std::size_t> max_len;
};

int cmd_check(const CheckArgs& a, const Globals& g) {
  const auto& ids = lemma_ids();
  if (std::find(ids.begin(), ids.end(), a.id) == ids.end() && a.id != "9") {
    std::string known;
    for (const auto& i : ids) known += (known.empty() ? "" : ", ") + i;
    throw UsageError("unknown lemma id '" + a.id + "' (known: " + known + ")");
  }
  CheckParams p;
  p.trials = a.trials;
  p.seed = g.seed;
  p.jobs = g.jobs;
  p.max_len = a.max_len;
  const CheckReport r = run_check(a.id, p);
  const std::string text = r.to_json().dump(2) + "\n";
  if (a.report.empty()) std::cout << text;
  else write_output(a.report, text);
  std::cerr << a.id << ": " << (r.ok() ? "PASS" : "FAIL") << " (" << r.trials << " trials, " << r.failure_count << " failures)\n";
  return r.ok() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-machine toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--jobs", g.jobs, "worker threads for check and design experiment")->check(CLI::Range(1u, 256u));

  MakeArgs mk;
  auto* make = app.add_subcommand("make", "build a library machine and print it as JSON");
  make->add_option("kind", mk.kind, "pr | pr-star | d1..d5 | z | biprimitive")->required();
  make->add_option("--letters", mk.letters, "tape alphabet, space separated");
  make->add_option("--size", mk.size, "alphabet size when --letters is absent");
  make->add_option("--direction", mk.direction, "z machine direction: left | right");
  make->add_option("--machine", mk.source, "source machine for biprimitive");
  make->add_option("-o,--output", mk.out, "output file");

  TransformArgs tr;
  auto* transform = app.add_subcommand("transform", "apply a machine transform and print the result");
  transform->add_option("kind", tr.kind, "normalize | historical | control | compose | stepgraph")->required();
  transform->add_option("--machine", tr.machine, "input machine JSON, - for stdin");
  transform->add_option("--alphabet", tr.alphabets, "compose: one alphabet per component");
  transform->add_option("--mode", tr.mode, "compose: parallel | sequential");
  transform->add_option("--direction", tr.direction, "compose: left | right");
  transform->add_option("--graph", tr.graph, "stepgraph: step graph JSON");
  transform->add_flag("--property3", tr.property3, "normalize: also split rules into left/right halves");
  transform->add_option("-o,--output", tr.out, "output file");

  RunArgs rn;
  auto* runc = app.add_subcommand("run", "apply a history to a word and print the trace as JSON lines");
  runc->add_option("--machine", rn.machine, "machine JSON, - for stdin")->required();
  runc->add_option("--word", rn.word, "start word")->required();
  runc->add_option("--history", rn.history, "rule names, name^-1 for inverses")->required();

  SearchArgs se;
  auto* search = app.add_subcommand("search", "breadth-first search for a shortest reduced computation");
  search->add_option("--machine", se.machine, "machine JSON, - for stdin")->required();
  search->add_option("--word", se.word, "start word")->required();
  search->add_option("--target", se.target, "target word")->required();
  search->add_option("--max-depth", se.limits.max_depth)->check(CLI::PositiveNumber);
  search->add_option("--max-alen", se.limits.max_a_length)->check(CLI::PositiveNumber);
  search->add_option("--max-configs", se.limits.max_configs)->check(CLI::PositiveNumber);

  PresentationArgs pr;
  auto* pres = app.add_subcommand("emit-presentation", "write the group presentation of a machine");
  pres->add_option("--machine", pr.machine, "machine JSON, - for stdin")->required();
  pres->add_option("--hub", pr.hub, "file holding the hub word");
  pres->add_option("--L", pr.L, "hub exponent");
  pres->add_option("-o,--output", pr.out, "output file");

  LengthArgs ln;
  auto* length = app.add_subcommand("length", "modified length of a word");
  length->add_option("--word", ln.word)->required();
  length->add_option("--delta", ln.delta, "a-letter weight, rational in (0,1)");
  length->add_option("--J", ln.J);
  length->add_option("--machine", ln.machine, "classify letters by this machine");

  std::string beads;
  std::size_t mix_J = 1;
  auto* mix = app.add_subcommand("mixture", "mixture of a necklace");
  mix->add_option("--beads", beads, "B/W string read clockwise")->required();
  mix->add_option("--J", mix_J)->check(CLI::PositiveNumber);

  DesignArgs ds;
  auto* design = app.add_subcommand("design", "chord and arc designs");
  design->require_subcommand(1);
  auto* dv = design->add_subcommand("validate", "list the violations of a design");
  dv->add_option("file", ds.file)->required();
  auto* dp = design->add_subcommand("check-p", "check Property P(lambda, n)");
  dp->add_option("file", ds.file)->required();
  dp->add_option("--lambda", ds.lambda);
  dp->add_option("--n", ds.n)->check(CLI::PositiveNumber);
  auto* de = design->add_subcommand("experiment", "ratio l(Q)/#T over random designs with Property P");
  de->add_option("--lambda", ds.lambda);
  de->add_option("--n", ds.n)->check(CLI::PositiveNumber);
  de->add_option("--trials", ds.trials)->check(CLI::PositiveNumber);
  de->add_option("--min-chords", ds.min_chords)->check(CLI::PositiveNumber);
  de->add_option("--max-chords", ds.max_chords)->check(CLI::PositiveNumber);
  de->add_option("-o,--output", ds.out, "CSV file");

  SuitableArgs su;
  auto* suitable = app.add_subcommand("suitable", "tabulate the pipeline function and check suitability");
  suitable->add_option("--alpha", su.alpha, "rational alpha >= 2");
  suitable->add_option("--nmax", su.nmax)->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
  suitable->add_option("--report", su.report, "JSON report file");

  CheckArgs ck;
  auto* check = app.add_subcommand("check", "run a lemma check");
  check->add_option("lemma", ck.id)->required();
  check->add_option("--trials", ck.trials)->check(CLI::PositiveNumber);
  check->add_option("--max-len", ck.max_len);
  check->add_option("--report", ck.report, "JSON report file");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  for (auto* sub : design->get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "smach: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*make) {
      write_output(mk.out, machine_to_json(make_machine(mk)).dump(2) + "\n");
      return kOk;
    }
    if (*transform) {
      write_output(tr.out, machine_to_json(transform_machine(tr)).dump(2) + "\n");
      return kOk;
    }
    if (*runc) return cmd_run(rn);
    if (*search) return cmd_search(se);
    if (*pres) return cmd_presentation(pr);
    if (*length) return cmd_length(ln);
    if (*mix) {
      std::cout << mixture(Necklace::parse(beads), mix_J) << '\n';
      return kOk;
    }
    if (*dv) return cmd_design_validate(ds);
    if (*dp) return cmd_design_check_p(ds);
    if (*de) return cmd_design_experiment(ds, g);
    if (*suitable) return cmd_suitable(su);
    if (*check) return cmd_check(ck, g);
  } catch (const UsageError& e) {
    std::cerr << "smach: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "smach: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "smach: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "smach: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
