#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace smach {

using Rational = boost::multiprecision::cpp_rational;
using json = nlohmann::json;

// ---- exact geometry --------------------------------------------------------------

struct Point {
  Rational x, y;
  bool operator==(const Point&) const = default;
};

inline int orientation(const Point& a, const Point& b, const Point& c) {
  const Rational v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return v > 0 ? 1 : v < 0 ? -1 : 0;
}

// p lies on the closed segment [a,b].
inline bool on_segment(const Point& p, const Point& a, const Point& b) {
  return orientation(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

enum class Contact { None, Proper, Touch };

// Proper: the open segments cross in one point. Touch: any other common point.
inline Contact segment_contact(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (std::max(a.x, b.x) < std::min(c.x, d.x) || std::max(c.x, d.x) < std::min(a.x, b.x) ||
      std::max(a.y, b.y) < std::min(c.y, d.y) || std::max(c.y, d.y) < std::min(a.y, b.y))
    return Contact::None;
  const int o1 = orientation(a, b, c), o2 = orientation(a, b, d), o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return Contact::Proper;
  if (on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)) return Contact::Touch;
  return Contact::None;
}

inline Rational norm2(const Point& p) { return p.x * p.x + p.y * p.y; }

// Rational point of the unit circle: ((1-t^2)/(1+t^2), 2t/(1+t^2)).
inline Point circle_point(const Rational& t) {
  const Rational d = 1 + t * t;
  return {(1 - t * t) / d, 2 * t / d};
}

// ---- designs ---------------------------------------------------------------------------

struct Chord {
  Point a, b;
};

using Arc = std::vector<Point>;  // polyline vertices

struct Design {
  std::vector<Chord> chords;
  std::vector<Arc> arcs;
};

struct Violation {
  std::string kind;   // e.g. "chords not disjoint"
  std::string where;  // e.g. "chords 0 and 2"
  std::string message() const { return where + ": " + kind; }
};

struct ArcChordCrossings {
  std::vector<std::size_t> crossings;  // chords in order along the arc
  std::vector<Violation> violations;
};

// Crossings of one arc with all chords, ordered along the arc. A vertex lying
// on a chord counts as a crossing only when its neighbours are strictly on
// opposite sides.
inline ArcChordCrossings arc_crossings(const Design& d, std::size_t arc) {
  ArcChordCrossings out;
  const Arc& pts = d.arcs[arc];
  struct Hit {
    std::size_t seg;
    Rational t;
    std::size_t chord;
  };
  std::vector<Hit> hits;
  for (std::size_t c = 0; c < d.chords.size(); ++c) {
    const Chord& ch = d.chords[c];
    const std::string where = "arc " + std::to_string(arc) + " and chord " + std::to_string(c);
    std::size_t count = 0;
    bool bad = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!on_segment(pts[i], ch.a, ch.b)) continue;
      if (i == 0 || i + 1 == pts.size()) {
        out.violations.push_back({"arc endpoint on a chord", where});
        bad = true;
        continue;
      }
      const int s1 = orientation(ch.a, ch.b, pts[i - 1]), s2 = orientation(ch.a, ch.b, pts[i + 1]);
      if (s1 * s2 < 0) {
        ++count;
        hits.push_back({i, 0, c});
      } else {
        out.violations.push_back({"non-transversal crossing", where});
        bad = true;
      }
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Point &p = pts[i], &q = pts[i + 1];
      if (on_segment(p, ch.a, ch.b) || on_segment(q, ch.a, ch.b)) continue;  // handled at the vertex
      switch (segment_contact(p, q, ch.a, ch.b)) {
        case Contact::Proper: {
          const Rational den = (q.x - p.x) * (ch.b.y - ch.a.y) - (q.y - p.y) * (ch.b.x - ch.a.x);
          const Rational num = (ch.a.x - p.x) * (ch.b.y - ch.a.y) - (ch.a.y - p.y) * (ch.b.x - ch.a.x);
          ++count;
          hits.push_back({i, num / den, c});
          break;
        }
        case Contact::Touch:
          out.violations.push_back({"non-transversal crossing", where});
          bad = true;
          break;
        case Contact::None:
          break;
      }
    }
    if (count > 1 && !bad) out.violations.push_back({"arc crosses a chord more than once", where});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.seg != y.seg ? x.seg < y.seg : x.t < y.t; });
  for (const auto& h : hits) out.crossings.push_back(h.chord);
  return out;
}

inline std::vector<Violation> validate(const Design& d) {
  std::vector<Violation> v;
  auto chord_name = [](std::size_t i) { return "chord " + std::to_string(i); };
  auto arc_name = [](std::size_t i) { return "arc " + std::to_string(i); };
  for (std::size_t i = 0; i < d.chords.size(); ++i) {
    const Chord& c = d.chords[i];
    if (norm2(c.a) != 1 || norm2(c.b) != 1) v.push_back({"chord endpoint off the unit circle", chord_name(i)});
    if (c.a == c.b) v.push_back({"degenerate chord", chord_name(i)});
    for (std::size_t j = 0; j < i; ++j)
      if (segment_contact(d.chords[j].a, d.chords[j].b, c.a, c.b) != Contact::None)
        v.push_back({"chords not disjoint", "chords " + std::to_string(j) + " and " + std::to_string(i)});
  }
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    const Arc& a = d.arcs[i];
    if (a.size() < 2) {
      v.push_back({"arc needs at least two vertices", arc_name(i)});
      continue;
    }
    for (const auto& p : a)
      if (norm2(p) >= 1) {
        v.push_back({"arc leaves the open disk", arc_name(i)});
        break;
      }
    bool simple = true;
    for (std::size_t s = 0; s + 1 < a.size() && simple; ++s) {
      if (a[s] == a[s + 1]) simple = false;
      for (std::size_t t = s + 1; t + 1 < a.size() && simple; ++t) {
        if (t == s + 1) {
          // neighbours share a[t]; anything more is an overlap
          if (orientation(a[s], a[s + 1], a[t + 1]) == 0 && (on_segment(a[s], a[t], a[t + 1]) || on_segment(a[t + 1], a[s], a[s + 1])))
            simple = false;
        } else if (segment_contact(a[s], a[s + 1], a[t], a[t + 1]) != Contact::None) {
          simple = false;
        }
      }
    }
    if (!simple) v.push_back({"arc not simple", arc_name(i)});
    for (std::size_t j = 0; j < i; ++j) {
      const Arc& b = d.arcs[j];
      bool hit = false;
      for (std::size_t s = 0; s + 1 < a.size() && !hit; ++s)
        for (std::size_t t = 0; t + 1 < b.size() && !hit; ++t)
          hit = segment_contact(a[s], a[s + 1], b[t], b[t + 1]) != Contact::None;
      if (hit) v.push_back({"arcs not disjoint", "arcs " + std::to_string(j) + " and " + std::to_string(i)});
    }
    auto cr = arc_crossings(d, i);
    v.insert(v.end(), cr.violations.begin(), cr.violations.end());
  }
  return v;
}

// Crossing sequence of every arc; throws on an invalid design.
inline std::vector<std::vector<std::size_t>> crossing_sequences(const Design& d) {
  auto v = validate(d);
  if (!v.empty()) throw std::invalid_argument("invalid design: " + v.front().message());
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < d.arcs.size(); ++i) out.push_back(arc_crossings(d, i).crossings);
  return out;
}

// ---- combinatorics on crossing sequences ---------------------------------------------

using Crossings = std::vector<std::vector<std::size_t>>;

// Contiguous window [begin, end) of an arc's crossing sequence.
struct SubarcRef {
  std::size_t arc = 0, begin = 0, end = 0;
  std::size_t length() const { return end - begin; }
  static SubarcRef whole(const Crossings& x, std::size_t arc) { return {arc, 0, x.at(arc).size()}; }
};

inline std::size_t chord_count(const Crossings& x) {
  std::size_t n = 0;
  for (const auto& c : x)
    for (auto t : c) n = std::max(n, t + 1);
  return n;
}

inline boost::dynamic_bitset<> chord_set(const Crossings& x, const SubarcRef& s, std::size_t chords) {
  if (s.arc >= x.size() || s.begin > s.end || s.end > x[s.arc].size()) throw std::out_of_range("subarc outside its arc");
  boost::dynamic_bitset<> b(chords);
  for (std::size_t i = s.begin; i < s.end; ++i) b.set(x[s.arc][i]);
  return b;
}

// Every chord crossing c1 also crosses c2.
inline bool parallel(const Crossings& x, const SubarcRef& c1, const SubarcRef& c2) {
  const std::size_t n = chord_count(x);
  return chord_set(x, c1, n).is_subset_of(chord_set(x, c2, n));
}
inline bool parallel(const Crossings& x, std::size_t arc1, std::size_t arc2) {
  return parallel(x, SubarcRef::whole(x, arc1), SubarcRef::whole(x, arc2));
}

// l(Q): total length of the arcs.
inline std::size_t total_length(const Crossings& x) {
  std::size_t n = 0;
  for (const auto& c : x) n += c.size();
  return n;
}

struct PropertyResult {
  bool holds = true;
  std::vector<SubarcRef> witness;  // D_1 || ... || D_n when violated
};

// Property P(lambda, n): no n distinct arcs carry subarcs D_i with
// |D_i| > (1-lambda)|C_i| and D_1 || D_2 || ... || D_n.
inline PropertyResult check_property_P(const Crossings& x, const Rational& lambda, std::size_t n) {
  if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("lambda must lie in (0,1)");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  PropertyResult res;
  if (x.size() < n) return res;
  const std::size_t chords = chord_count(x);
  struct Cand {
    SubarcRef ref;
    boost::dynamic_bitset<> set;
  };
  std::vector<std::vector<Cand>> cands(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    const Rational need = (1 - lambda) * static_cast<long long>(x[a].size());
    for (std::size_t b = 0; b < x[a].size(); ++b)
      for (std::size_t e = b + 1; e <= x[a].size(); ++e)
        if (Rational(static_cast<long long>(e - b)) > need) cands[a].push_back({{a, b, e}, chord_set(x, {a, b, e}, chords)});
  }
  std::vector<char> used(x.size(), 0);
  std::vector<const Cand*> chain;
  auto dfs = [&](auto& self) -> bool {
    if (chain.size() == n) return true;
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (used[a]) continue;
      used[a] = 1;
      for (const auto& c : cands[a]) {
        if (!chain.empty() && !chain.back()->set.is_subset_of(c.set)) continue;
        chain.push_back(&c);
        if (self(self)) return true;
        chain.pop_back();
      }
      used[a] = 0;
    }
    return false;
  };
  if (dfs(dfs)) {
    res.holds = false;
    for (const auto* c : chain) res.witness.push_back(c->ref);
  }
  return res;
}

struct Weights {
  std::vector<std::optional<std::size_t>> nu;  // empty for chords no arc crosses
  std::size_t total = 0;
  std::size_t crossed_chords = 0;
};

// nu(T) = min(arcs crossing T, 2n-1) on chords crossed by some arc.
inline Weights weights(const Crossings& x, std::size_t chords, std::size_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::vector<std::size_t> hits(chords, 0);
  for (const auto& c : x)
    for (auto t : c) ++hits.at(t);
  Weights w;
  w.nu.resize(chords);
  for (std::size_t t = 0; t < chords; ++t) {
    if (hits[t] == 0) continue;
    w.nu[t] = std::min(hits[t], 2 * n - 1);
    w.total += *w.nu[t];
    ++w.crossed_chords;
  }
  return w;
}

// ---- generator ----------------------------------------------------------------------

using DesignRng = std::mt19937_64;

// Nearly vertical chords from circle_point(top[k]) to circle_point(bottom[k]).
// With top increasing and bottom decreasing the chords are pairwise disjoint.
inline std::vector<Chord> fan_chords(const std::vector<Rational>& top, const std::vector<Rational>& bottom) {
  if (top.size() != bottom.size()) throw std::invalid_argument("fan_chords: size mismatch");
  std::vector<Chord> out;
  for (std::size_t k = 0; k < top.size(); ++k) out.push_back({circle_point(top[k]), circle_point(bottom[k])});
  return out;
}

// x-coordinate where the chord meets the horizontal line at height y.
inline Rational chord_x_at(const Chord& c, const Rational& y) {
  return c.a.x + (c.b.x - c.a.x) * (y - c.a.y) / (c.b.y - c.a.y);
}

// x-monotone polyline at height about y crossing chords first..last of a fan
// (sorted right to left, as fan_chords builds them). Vertices sit midway
// between neighbouring chords; jitter[i] shifts vertex i vertically.
inline Arc block_arc(const std::vector<Chord>& fan, const Rational& y, std::size_t first, std::size_t last,
                     const std::vector<Rational>& jitter = {}) {
  if (first > last || last >= fan.size()) throw std::invalid_argument("block_arc: bad chord block");
  std::vector<Rational> xs;
  const Rational margin(1, 20);
  xs.push_back(first == 0 ? chord_x_at(fan[0], y) + margin : (chord_x_at(fan[first - 1], y) + chord_x_at(fan[first], y)) / 2);
  for (std::size_t k = first; k < last; ++k) xs.push_back((chord_x_at(fan[k], y) + chord_x_at(fan[k + 1], y)) / 2);
  xs.push_back(last + 1 == fan.size() ? chord_x_at(fan[last], y) - margin : (chord_x_at(fan[last], y) + chord_x_at(fan[last + 1], y)) / 2);
  Arc a;
  for (std::size_t i = 0; i < xs.size(); ++i) a.push_back({xs[i], y + (i < jitter.size() ? jitter[i] : Rational(0))});
  return a;
}

struct GeneratorParams {
  std::size_t min_chords = 2, max_chords = 16;
  std::size_t arcs_per_chord = 3;  // arc attempts per chord
  std::size_t max_attempts = 20;   // whole-design retries before giving up
};

// Parameters of one fan: chord tops in [1/2, 2] (x between -0.6 and 0.6),
// bottoms mirrored with a small tilt.
inline std::vector<Chord> random_fan(std::size_t k, DesignRng& rng) {
  std::vector<Rational> top, bottom;
  const long long den = 64 * static_cast<long long>(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    Rational t = Rational(1, 2) + Rational(3 * static_cast<long long>(i + 1), 2 * static_cast<long long>(k + 1));
    top.push_back(t);
    bottom.push_back(-(t + Rational(static_cast<long long>(rng() % 9), den)));
  }
  return fan_chords(top, bottom);
}

// Random design with Property P(lambda, n): arcs on separate horizontal lanes,
// each crossing a random block of consecutive chords, kept only while P holds.
inline std::optional<Design> random_design(std::size_t chords, const Rational& lambda, std::size_t n, const GeneratorParams& g,
                                           DesignRng& rng) {
  for (std::size_t attempt = 0; attempt < g.max_attempts; ++attempt) {
    Design d;
    d.chords = random_fan(chords, rng);
    const std::size_t lanes = g.arcs_per_chord * chords;
    const Rational spacing = Rational(13, 10) / static_cast<long long>(lanes + 1);
    Crossings x;
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      const Rational y = Rational(-13, 20) + spacing * static_cast<long long>(lane + 1);
      const std::size_t first = rng() % chords;
      const std::size_t last = first + rng() % (chords - first);
      std::vector<Rational> jitter;
      for (std::size_t i = 0; i <= last - first + 1; ++i)
        jitter.push_back(spacing * Rational(static_cast<long long>(rng() % 9) - 4, 20));
      Arc a = block_arc(d.chords, y, first, last, jitter);
      std::vector<std::size_t> seq;
      for (std::size_t k = first; k <= last; ++k) seq.push_back(k);
      x.push_back(seq);
      if (!check_property_P(x, lambda, n).holds) {
        x.pop_back();
        continue;
      }
      d.arcs.push_back(std::move(a));
    }
    if (!validate(d).empty()) continue;
    Crossings real;
    for (std::size_t i = 0; i < d.arcs.size(); ++i) real.push_back(arc_crossings(d, i).crossings);
    if (check_property_P(real, lambda, n).holds) return d;
  }
  return std::nullopt;
}

struct ExperimentRow {
  std::size_t trial = 0, chords = 0, arcs = 0, ell_q = 0, hash_t = 0;
  Rational ratio;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::size_t exhausted = 0;  // trials where the generator found no design
  std::optional<Rational> max_ratio;

  std::string csv() const {
    std::ostringstream out;
    out << "trial,chords,arcs,ell_Q,hash_T,ratio\n";
    for (const auto& r : rows)
      out << r.trial << ',' << r.chords << ',' << r.arcs << ',' << r.ell_q << ',' << r.hash_t << ',' << r.ratio.str() << '\n';
    return out.str();
  }
};

inline std::uint64_t design_trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// l(Q)/#T over random P(lambda,n) designs whose size cycles through
// min_chords..max_chords. Trial i is seeded from (seed, i) alone.
inline ExperimentReport ratio_experiment(const GeneratorParams& g, const Rational& lambda, std::size_t n, std::size_t trials,
                                         std::uint64_t seed, unsigned jobs = 1) {
  if (trials < 1) throw std::invalid_argument("ratio_experiment needs trials >= 1");
  if (g.min_chords < 1 || g.max_chords < g.min_chords) throw std::invalid_argument("ratio_experiment: bad chord range");
  std::vector<std::optional<ExperimentRow>> rows(trials);
  auto work = [&](unsigned j) {
    for (std::size_t i = j; i < trials; i += std::max(1u, jobs)) {
      DesignRng rng(design_trial_seed(seed, i));
      const std::size_t k = g.min_chords + i % (g.max_chords - g.min_chords + 1);
      auto d = random_design(k, lambda, n, g, rng);
      if (!d) continue;
      Crossings x;  // d is already validated
      for (std::size_t a = 0; a < d->arcs.size(); ++a) x.push_back(arc_crossings(*d, a).crossings);
      ExperimentRow r;
      r.trial = i;
      r.chords = d->chords.size();
      r.arcs = d->arcs.size();
      r.ell_q = total_length(x);
      r.hash_t = d->chords.size();
      r.ratio = Rational(static_cast<long long>(r.ell_q), static_cast<long long>(r.hash_t));
      rows[i] = r;
    }
  };
  if (jobs <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& t : pool) t.join();
  }
  ExperimentReport rep;
  for (auto& r : rows) {
    if (!r) {
      ++rep.exhausted;
      continue;
    }
    if (!rep.max_ratio || r->ratio > *rep.max_ratio) rep.max_ratio = r->ratio;
    rep.rows.push_back(std::move(*r));
  }
  return rep;
}

// ---- JSON ------------------------------------------------------------------------------

inline Rational rational_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return Rational(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(where + ": expected an integer or a rational string like \"3/5\"");
}

inline Point point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument(where + ": expected [x, y]");
  return {rational_from_json(j[0], where + "[0]"), rational_from_json(j[1], where + "[1]")};
}

inline json point_to_json(const Point& p) { return json::array({p.x.str(), p.y.str()}); }

inline Design design_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("design: expected an object with \"chords\" and \"arcs\"");
  Design d;
  const json empty = json::array();
  const json& chords = j.contains("chords") ? j["chords"] : empty;
  const json& arcs = j.contains("arcs") ? j["arcs"] : empty;
  if (!chords.is_array() || !arcs.is_array()) throw std::invalid_argument("design: \"chords\" and \"arcs\" must be arrays");
  for (std::size_t i = 0; i < chords.size(); ++i) {
    const std::string where = "chords[" + std::to_string(i) + "]";
    if (!chords[i].is_array() || chords[i].size() != 2) throw std::invalid_argument(where + ": expected two endpoints");
    d.chords.push_back({point_from_json(chords[i][0], where + "[0]"), point_from_json(chords[i][1], where + "[1]")});
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string where = "arcs[" + std::to_string(i) + "]";
    if (!arcs[i].is_array()) throw std::invalid_argument(where + ": expected a vertex list");
    Arc a;
    for (std::size_t k = 0; k < arcs[i].size(); ++k) a.push_back(point_from_json(arcs[i][k], where + "[" + std::to_string(k) + "]"));
    d.arcs.push_back(std::move(a));
  }
  return d;
}

inline json design_to_json(const Design& d) {
  json chords = json::array(), arcs = json::array();
  for (const auto& c : d.chords) chords.push_back(json::array({point_to_json(c.a), point_to_json(c.b)}));
  for (const auto& a : d.arcs) {
    json v = json::array();
    for (const auto& p : a) v.push_back(point_to_json(p));
    arcs.push_back(v);
  }
  return {{"chords", chords}, {"arcs", arcs}};
}

}  // namespace smach
