#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "smach/engine.hpp"

namespace smach {

using json = nlohmann::json;

// Raised for malformed input; the message names the offending location.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMachineFormat = 1;

inline json machine_to_json(const SMachine& m) {
  json j;
  j["format"] = kMachineFormat;
  j["name"] = m.name;
  auto alph = [](const Alphabet& a) { return json{{"name", a.name}, {"letters", a.letters}}; };
  j["parts"] = json::array();
  for (const auto& p : m.hw.parts) j["parts"].push_back(alph(p));
  j["tapes"] = json::array();
  for (const auto& t : m.hw.tapes) j["tapes"].push_back(alph(t));
  j["rules"] = json::array();
  for (const auto& r : m.rules) {
    json jr;
    jr["name"] = r.name;
    jr["parts"] = json::array();
    for (const auto& p : r.parts) jr["parts"].push_back({format_word(m, p.from), format_word(m, p.to)});
    json locks = json::array();
    json permit = json::object();
    for (std::size_t s = 1; s <= m.N(); ++s) {
      std::size_t n = r.permitted_count(s);
      if (m.hw.tape_size(s) == 0) continue;
      if (n == 0) {
        locks.push_back(s);
      } else if (n < m.hw.tape_size(s)) {
        json letters = json::array();
        for (std::size_t k = 0; k < r.permit[s].size(); ++k)
          if (r.permit[s][k]) letters.push_back(m.hw.tape(s).letters[k]);
        permit[std::to_string(s)] = letters;
      }
    }
    if (!locks.empty()) jr["locks"] = locks;
    if (!permit.empty()) jr["permit"] = permit;
    j["rules"].push_back(jr);
  }
  if (m.input) {
    j["input"] = format_word(m, *m.input);
    j["input_sectors"] = m.input_sectors;
  }
  if (m.accept) j["accept"] = format_word(m, *m.accept);
  return j;
}

inline SMachine machine_from_json(const json& j) {
  auto where = [](const std::string& loc, const std::string& msg) { return FormatError(loc + ": " + msg); };
  try {
    if (!j.is_object()) throw where("$", "machine must be a JSON object");
    if (!j.contains("format") || j["format"] != kMachineFormat)
      throw where("$.format", "expected format " + std::to_string(kMachineFormat));
    SMachine m;
    m.name = j.value("name", "");
    auto alph = [&](const json& a, const std::string& loc) {
      if (!a.is_object() || !a.contains("letters") || !a["letters"].is_array())
        throw where(loc, "alphabet needs a 'letters' array");
      Alphabet out;
      out.name = a.value("name", "");
      for (const auto& l : a["letters"]) {
        if (!l.is_string()) throw where(loc + ".letters", "letters must be strings");
        out.letters.push_back(l.get<std::string>());
      }
      return out;
    };
    if (!j.contains("parts") || !j["parts"].is_array()) throw where("$.parts", "missing array");
    if (!j.contains("tapes") || !j["tapes"].is_array()) throw where("$.tapes", "missing array");
    for (std::size_t i = 0; i < j["parts"].size(); ++i)
      m.hw.parts.push_back(alph(j["parts"][i], "$.parts[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < j["tapes"].size(); ++i)
      m.hw.tapes.push_back(alph(j["tapes"][i], "$.tapes[" + std::to_string(i) + "]"));
    try {
      m.hw.index();
    } catch (const std::invalid_argument& e) {
      throw where("$.parts/$.tapes", e.what());
    }
    const json& rules = j.value("rules", json::array());
    for (std::size_t k = 0; k < rules.size(); ++k) {
      const std::string loc = "$.rules[" + std::to_string(k) + "]";
      const json& jr = rules[k];
      Rule r;
      r.name = jr.value("name", "");
      r.permit = m.full_permit();
      if (!jr.contains("parts") || !jr["parts"].is_array()) throw where(loc + ".parts", "missing array");
      for (std::size_t p = 0; p < jr["parts"].size(); ++p) {
        const json& jp = jr["parts"][p];
        const std::string ploc = loc + ".parts[" + std::to_string(p) + "]";
        if (!jp.is_array() || jp.size() != 2 || !jp[0].is_string() || !jp[1].is_string())
          throw where(ploc, "part must be a pair of token strings");
        try {
          r.parts.push_back({parse_word(m.hw, jp[0].get<std::string>()), parse_word(m.hw, jp[1].get<std::string>())});
        } catch (const std::invalid_argument& e) {
          throw where(ploc, e.what());
        }
      }
      for (const auto& s : jr.value("locks", json::array())) {
        std::size_t sec = s.get<std::size_t>();
        if (sec < 1 || sec > m.N()) throw where(loc + ".locks", "sector " + std::to_string(sec) + " out of range");
        std::fill(r.permit[sec].begin(), r.permit[sec].end(), 0);
      }
      if (jr.contains("permit")) {
        for (const auto& [key, letters] : jr["permit"].items()) {
          std::size_t sec = 0;
          try {
            sec = std::stoul(key);
          } catch (const std::exception&) {
            throw where(loc + ".permit", "sector key '" + key + "' is not a number");
          }
          if (sec < 1 || sec > m.N()) throw where(loc + ".permit", "sector " + key + " out of range");
          std::fill(r.permit[sec].begin(), r.permit[sec].end(), 0);
          for (const auto& l : letters) {
            auto letter = m.hw.find(l.get<std::string>());
            if (!letter || letter->kind != Kind::Tape || letter->alphabet != sec)
              throw where(loc + ".permit." + key, "'" + l.get<std::string>() + "' is not a letter of that sector");
            r.permit[sec][letter->symbol] = 1;
          }
        }
      }
      m.rules.push_back(std::move(r));
    }
    try {
      if (j.contains("input")) {
        m.input = parse_word(m.hw, j["input"].get<std::string>());
        m.input_sectors = j.value("input_sectors", std::vector<std::size_t>{});
      }
      if (j.contains("accept")) m.accept = parse_word(m.hw, j["accept"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw where("$.input/$.accept", e.what());
    }
    try {
      m.finalize();
    } catch (const std::invalid_argument& e) {
      throw where("$.rules", e.what());
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("json: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline SMachine read_machine(const std::string& path) {
  json j = read_json_file(path);
  try {
    return machine_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

// One JSON line per configuration: step index, history prefix, word.
inline std::string trace_jsonl(const SMachine& m, const Computation& c) {
  std::ostringstream out;
  Word prefix;
  for (std::size_t i = 0; i < c.trace.size(); ++i) {
    if (i > 0) prefix.push(c.history[i - 1]);
    json line{{"step", i}, {"history", format_word(m, prefix)}, {"word", format_word(m, c.trace[i])}};
    out << line.dump() << '\n';
  }
  return out.str();
}

}  // namespace smach
