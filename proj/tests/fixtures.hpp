#pragma once

#include <random>
#include <vector>

#include "smach/designs.hpp"

namespace fixtures {

using smach::Design;
using smach::Point;
using smach::Rational;

// Arc of length 2 parallel to an arc of length 5 on a fan of five chords.
inline Design two_in_five() {
  std::vector<Rational> top, bottom;
  for (long long i = 1; i <= 5; ++i) {
    top.push_back(Rational(1, 2) + Rational(i, 4));
    bottom.push_back(-(Rational(1, 2) + Rational(i, 4)));
  }
  Design d;
  d.chords = smach::fan_chords(top, bottom);
  d.arcs.push_back(smach::block_arc(d.chords, Rational(1, 5), 0, 4));
  d.arcs.push_back(smach::block_arc(d.chords, Rational(-1, 5), 1, 2));
  return d;
}

inline Rational small_rational(std::mt19937_64& rng, long long span) {
  return Rational(static_cast<long long>(rng() % (2 * span + 1)) - span, 8 * span);
}

// Generated designs, some left intact and some broken in one of several ways:
// a vertex moved onto a chord, a vertex snapped to a coarse grid, an extra chord,
// a vertex pushed out of the disk, an arc duplicated, or an arc folded back.
inline std::vector<Design> design_fixtures(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Design> out;
  smach::GeneratorParams g;
  g.arcs_per_chord = 2;
  while (out.size() < count) {
    auto base = smach::random_design(2 + rng() % 4, Rational(1, 4), 3, g, rng);
    if (!base || base->arcs.empty()) continue;
    Design d = *base;
    auto& arc = d.arcs[rng() % d.arcs.size()];
    const std::size_t v = rng() % arc.size();
    switch (rng() % 8) {
      case 0:
      case 1:
        break;
      case 2: {  // vertex on a chord, at a rational point of it
        const auto& ch = d.chords[rng() % d.chords.size()];
        const Rational t(static_cast<long long>(1 + rng() % 7), 8);
        arc[v] = {ch.a.x + t * (ch.b.x - ch.a.x), ch.a.y + t * (ch.b.y - ch.a.y)};
        break;
      }
      case 3: {  // coarse grid snap, which creates touching and collinear cases
        auto snap = [](const Rational& r) {
          const Rational s = r * 4;
          return Rational(numerator(s) / denominator(s), 4);
        };
        for (auto& p : arc) p = {snap(p.x), snap(p.y)};
        break;
      }
      case 4: {  // extra chord between random rational circle points
        d.chords.push_back({smach::circle_point(small_rational(rng, 16) * 8), smach::circle_point(small_rational(rng, 16) * 8)});
        break;
      }
      case 5:
        arc[v] = {arc[v].x * 3, arc[v].y * 3};
        break;
      case 6: {
        const smach::Arc copy = arc;
        d.arcs.push_back(copy);
        break;
      }
      default: {  // fold the arc back over itself
        Point p = arc.back();
        arc.push_back({p.x + (arc.front().x - p.x) / 2, p.y + (arc.front().y - p.y) / 2 + small_rational(rng, 2) / 100});
        break;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace fixtures
