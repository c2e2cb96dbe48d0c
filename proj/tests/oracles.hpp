#pragma once

// Slow, direct reimplementations used as references by the unit and acceptance tests.
// They share no code with the library beyond its plain data types.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "smach/designs.hpp"

namespace oracle {

using smach::Point;
using smach::Rational;

// ---- designs -------------------------------------------------------------------------

inline Rational cross(const Point& u, const Point& v) { return u.x * v.y - u.y * v.x; }
inline Rational dot(const Point& u, const Point& v) { return u.x * v.x + u.y * v.y; }
inline Point minus(const Point& u, const Point& v) { return {u.x - v.x, u.y - v.y}; }

// Common points of segments [p,q] and [r,s]: nothing, one point (with its
// parameter along [p,q]), or an overlap of positive length.
struct Meet {
  enum Kind { None, Point1, Overlap } kind = None;
  Rational s;  // parameter on [p,q] for Point1
  Point at;
};

inline Meet meet(const Point& p, const Point& q, const Point& r, const Point& s) {
  const Point d1 = minus(q, p), d2 = minus(s, r), w = minus(r, p);
  const Rational det = cross(d1, d2);
  Meet m;
  if (det != 0) {
    // Cramer's rule for p + a d1 = r + b d2
    const Rational a = cross(w, d2) / det, b = cross(w, d1) / det;
    if (a < 0 || a > 1 || b < 0 || b > 1) return m;
    m.kind = Meet::Point1;
    m.s = a;
    m.at = {p.x + a * d1.x, p.y + a * d1.y};
    return m;
  }
  if (cross(w, d1) != 0) return m;  // parallel, different lines
  const Rational len = dot(d1, d1);
  if (len == 0) return m;
  Rational a = dot(minus(r, p), d1) / len, b = dot(minus(s, p), d1) / len;
  if (a > b) std::swap(a, b);
  const Rational lo = std::max(a, Rational(0)), hi = std::min(b, Rational(1));
  if (lo > hi) return m;
  if (lo == hi) {
    m.kind = Meet::Point1;
    m.s = lo;
    m.at = {p.x + lo * d1.x, p.y + lo * d1.y};
    return m;
  }
  m.kind = Meet::Overlap;
  return m;
}

inline bool segments_meet(const Point& p, const Point& q, const Point& r, const Point& s) {
  return meet(p, q, r, s).kind != Meet::None;
}

inline int side(const Point& a, const Point& b, const Point& c) {
  const Rational v = cross(minus(b, a), minus(c, a));
  return v > 0 ? 1 : v < 0 ? -1 : 0;
}

struct DesignVerdict {
  bool valid = true;
  std::vector<std::vector<std::size_t>> crossings;
};

inline DesignVerdict judge(const smach::Design& d) {
  DesignVerdict v;
  auto bad = [&]() {
    v.valid = false;
    return v;
  };
  for (std::size_t i = 0; i < d.chords.size(); ++i) {
    const auto& c = d.chords[i];
    if (dot(c.a, c.a) != 1 || dot(c.b, c.b) != 1 || c.a == c.b) return bad();
    for (std::size_t j = 0; j < i; ++j)
      if (segments_meet(c.a, c.b, d.chords[j].a, d.chords[j].b)) return bad();
  }
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    const auto& a = d.arcs[i];
    if (a.size() < 2) return bad();
    for (const auto& p : a)
      if (dot(p, p) >= 1) return bad();
    for (std::size_t s = 0; s + 1 < a.size(); ++s) {
      if (a[s] == a[s + 1]) return bad();
      for (std::size_t t = s + 1; t + 1 < a.size(); ++t) {
        const Meet m = meet(a[s], a[s + 1], a[t], a[t + 1]);
        if (m.kind == Meet::None) continue;
        if (t == s + 1 && m.kind == Meet::Point1 && m.at == a[t]) continue;  // the shared vertex
        return bad();
      }
    }
    for (std::size_t j = 0; j < i; ++j)
      for (std::size_t s = 0; s + 1 < a.size(); ++s)
        for (std::size_t t = 0; t + 1 < d.arcs[j].size(); ++t)
          if (segments_meet(a[s], a[s + 1], d.arcs[j][t], d.arcs[j][t + 1])) return bad();

    // crossings as (position along the arc, chord); vertices counted once
    std::vector<std::pair<std::pair<std::size_t, Rational>, std::size_t>> hits;
    for (std::size_t c = 0; c < d.chords.size(); ++c) {
      const auto& ch = d.chords[c];
      std::vector<std::pair<std::size_t, Rational>> at;
      for (std::size_t s = 0; s + 1 < a.size(); ++s) {
        const Meet m = meet(a[s], a[s + 1], ch.a, ch.b);
        if (m.kind == Meet::Overlap) return bad();
        if (m.kind == Meet::None) continue;
        // normalise a vertex hit to (vertex index, 0)
        std::pair<std::size_t, Rational> pos = m.s == 1 ? std::make_pair(s + 1, Rational(0)) : std::make_pair(s, m.s);
        if (std::find(at.begin(), at.end(), pos) == at.end()) at.push_back(pos);
      }
      for (const auto& pos : at) {
        if (pos.second == 0) {
          const std::size_t k = pos.first;
          if (k == 0 || k + 1 == a.size()) return bad();
          if (side(ch.a, ch.b, a[k - 1]) * side(ch.a, ch.b, a[k + 1]) >= 0) return bad();
        }
      }
      if (at.size() > 1) return bad();
      for (const auto& pos : at) hits.push_back({pos, c});
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::size_t> seq;
    for (const auto& h : hits) seq.push_back(h.second);
    v.crossings.push_back(seq);
  }
  return v;
}

// Property P by trying every ordered tuple of distinct arcs and every window on each.
inline bool property_P(const std::vector<std::vector<std::size_t>>& x, const Rational& lambda, std::size_t n) {
  std::vector<std::size_t> tuple;
  std::vector<bool> used(x.size(), false);
  std::vector<std::set<std::size_t>> sets;
  bool found = false;
  auto go = [&](auto& self) -> void {
    if (found) return;
    if (tuple.size() == n) {
      found = true;
      return;
    }
    for (std::size_t a = 0; a < x.size() && !found; ++a) {
      if (used[a]) continue;
      for (std::size_t b = 0; b < x[a].size(); ++b)
        for (std::size_t e = b + 1; e <= x[a].size(); ++e) {
          if (Rational(static_cast<long long>(e - b)) <= (1 - lambda) * static_cast<long long>(x[a].size())) continue;
          std::set<std::size_t> s(x[a].begin() + static_cast<std::ptrdiff_t>(b), x[a].begin() + static_cast<std::ptrdiff_t>(e));
          if (!sets.empty() && !std::includes(s.begin(), s.end(), sets.back().begin(), sets.back().end())) continue;
          used[a] = true;
          tuple.push_back(a);
          sets.push_back(s);
          self(self);
          sets.pop_back();
          tuple.pop_back();
          used[a] = false;
          if (found) return;
        }
    }
  };
  go(go);
  return !found;
}

// ---- necklaces -------------------------------------------------------------------------

// Sum over j = 1..J of ordered white pairs whose clockwise arc holds >= j black beads.
inline std::uint64_t mixture(const std::string& beads, std::size_t J) {
  const std::size_t n = beads.size();
  std::uint64_t mu = 0;
  for (std::size_t j = 1; j <= J; ++j)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b || beads[a] != 'W' || beads[b] != 'W') continue;
        std::size_t blacks = 0;
        for (std::size_t i = (a + 1) % n; i != b; i = (i + 1) % n) blacks += beads[i] == 'B';
        mu += blacks >= j;
      }
  return mu;
}

// ---- binary to unary rewriting -----------------------------------------------------------

// Runs |0 -> 0||, 1 -> 0|, 0 -> (empty) on the string itself: the first rule in
// that order with an occurrence fires at its leftmost occurrence. Returns the
// number of steps and checks the final string is all marks.
inline std::optional<std::uint64_t> rewrite_steps(std::string w, std::size_t& marks) {
  std::uint64_t steps = 0;
  while (true) {
    if (auto p = w.find("|0"); p != std::string::npos) {
      w.replace(p, 2, "0||");
    } else if (auto p1 = w.find('1'); p1 != std::string::npos) {
      w.replace(p1, 1, "0|");
    } else if (auto p0 = w.find('0'); p0 != std::string::npos) {
      w.erase(p0, 1);
    } else {
      break;
    }
    ++steps;
  }
  if (w.find_first_not_of('|') != std::string::npos) return std::nullopt;
  marks = w.size();
  return steps;
}

}  // namespace oracle
