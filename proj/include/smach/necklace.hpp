#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace smach {

enum class Bead : char { White = 'W', Black = 'B' };

// Cyclic bead sequence, read clockwise. Equality is up to rotation.
class Necklace {
 public:
  Necklace() = default;
  explicit Necklace(std::vector<Bead> beads) : beads_(std::move(beads)) {}

  static Necklace parse(const std::string& s) {
    std::vector<Bead> b;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char c = s[i];
      if (c == 'W' || c == 'w') b.push_back(Bead::White);
      else if (c == 'B' || c == 'b') b.push_back(Bead::Black);
      else if (c != ' ') throw std::invalid_argument("bead " + std::to_string(i + 1) + ": expected B or W, got '" + c + "'");
    }
    return Necklace(std::move(b));
  }

  std::size_t size() const { return beads_.size(); }
  bool empty() const { return beads_.empty(); }
  Bead operator[](std::size_t i) const { return beads_[i]; }
  const std::vector<Bead>& beads() const { return beads_; }

  std::size_t count(Bead c) const { return static_cast<std::size_t>(std::count(beads_.begin(), beads_.end(), c)); }

  std::string str() const {
    std::string s;
    for (Bead b : beads_) s += static_cast<char>(b);
    return s;
  }

  // Lexicographically smallest rotation.
  std::vector<Bead> canonical() const {
    std::vector<Bead> best = beads_;
    for (std::size_t r = 1; r < beads_.size(); ++r) {
      std::vector<Bead> rot(beads_.begin() + static_cast<std::ptrdiff_t>(r), beads_.end());
      rot.insert(rot.end(), beads_.begin(), beads_.begin() + static_cast<std::ptrdiff_t>(r));
      best = std::min(best, rot);
    }
    return best;
  }

  Necklace rotated(std::size_t r) const {
    if (beads_.empty()) return *this;
    r %= beads_.size();
    std::vector<Bead> rot(beads_.begin() + static_cast<std::ptrdiff_t>(r), beads_.end());
    rot.insert(rot.end(), beads_.begin(), beads_.begin() + static_cast<std::ptrdiff_t>(r));
    return Necklace(std::move(rot));
  }

  bool operator==(const Necklace& o) const { return size() == o.size() && canonical() == o.canonical(); }

 private:
  std::vector<Bead> beads_;
};

// Black beads strictly inside the clockwise arc from position a to position b.
class ArcCounter {
 public:
  explicit ArcCounter(const Necklace& o) : n_(o.size()), prefix_(2 * o.size() + 1, 0) {
    for (std::size_t i = 0; i < 2 * n_; ++i) prefix_[i + 1] = prefix_[i] + (o[i % n_] == Bead::Black);
  }
  std::size_t inside(std::size_t a, std::size_t b) const {
    const std::size_t end = b > a ? b : b + n_;
    return prefix_[end] - prefix_[a + 1];
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> prefix_;
};

// #P_j: ordered pairs of distinct white beads whose clockwise arc has >= j black beads.
inline std::uint64_t pair_count(const Necklace& o, std::size_t j) {
  ArcCounter arcs(o);
  std::uint64_t n = 0;
  for (std::size_t a = 0; a < o.size(); ++a) {
    if (o[a] != Bead::White) continue;
    for (std::size_t b = 0; b < o.size(); ++b)
      if (b != a && o[b] == Bead::White && arcs.inside(a, b) >= j) ++n;
  }
  return n;
}

// mu_J = sum_{j=1..J} #P_j, i.e. the sum over ordered white pairs of min(blacks on the arc, J).
inline std::uint64_t mixture(const Necklace& o, std::size_t J) {
  if (J < 1) throw std::invalid_argument("mixture needs J >= 1");
  ArcCounter arcs(o);
  std::uint64_t mu = 0;
  for (std::size_t a = 0; a < o.size(); ++a) {
    if (o[a] != Bead::White) continue;
    for (std::size_t b = 0; b < o.size(); ++b)
      if (b != a && o[b] == Bead::White) mu += std::min(arcs.inside(a, b), J);
  }
  return mu;
}

inline Necklace remove_bead(const Necklace& o, std::size_t pos) {
  if (pos >= o.size()) throw std::out_of_range("bead position " + std::to_string(pos) + " out of range for a necklace of " + std::to_string(o.size()));
  std::vector<Bead> b = o.beads();
  b.erase(b.begin() + static_cast<std::ptrdiff_t>(pos));
  return Necklace(std::move(b));
}

struct TripleRemoval {
  std::size_t m1 = 0, m2 = 0;
  std::uint64_t before = 0, after = 0;
  bool ok = false;
};

// Removes v2 where v1, v2, v3 are black, v2 lies on the clockwise arc v1 -> v3
// and that arc holds at most J black beads besides v1 and v3. Checks that the
// mixture drops by at least m1*m2 (white beads on v1 -> v2 and v2 -> v3).
inline TripleRemoval triple_removal(const Necklace& o, std::size_t v1, std::size_t v2, std::size_t v3, std::size_t J) {
  const std::size_t n = o.size();
  if (v1 >= n || v2 >= n || v3 >= n) throw std::out_of_range("triple removal: position out of range");
  if (v1 == v2 || v2 == v3 || v1 == v3) throw std::invalid_argument("triple removal: positions must be distinct");
  if (o[v1] != Bead::Black || o[v2] != Bead::Black || o[v3] != Bead::Black)
    throw std::invalid_argument("triple removal: v1, v2, v3 must be black");
  auto dist = [n](std::size_t a, std::size_t b) { return (b + n - a) % n; };
  if (dist(v1, v2) >= dist(v1, v3)) throw std::invalid_argument("triple removal: v2 is not on the clockwise arc v1 -> v3");
  ArcCounter arcs(o);
  if (arcs.inside(v1, v3) > J) throw std::invalid_argument("triple removal: more than J black beads between v1 and v3");
  TripleRemoval t;
  for (std::size_t i = (v1 + 1) % n; i != v2; i = (i + 1) % n) t.m1 += o[i] == Bead::White;
  for (std::size_t i = (v2 + 1) % n; i != v3; i = (i + 1) % n) t.m2 += o[i] == Bead::White;
  t.before = mixture(o, J);
  t.after = mixture(remove_bead(o, v2), J);
  t.ok = t.after + t.m1 * t.m2 <= t.before;
  return t;
}

inline bool check_triple_removal(const Necklace& o, std::size_t v1, std::size_t v2, std::size_t v3, std::size_t J) {
  return triple_removal(o, v1, v2, v3, J).ok;
}


// ---- clause-by-clause check of the removal laws ------------------------------------

// Clauses: "a" mu_J <= J(n^2 - n); "b.pairs" #P'_j <= #P_j after removing a white
// bead; "b.upper" mu' <= mu; "b.lower" mu - Jn < mu' as literally stated;
// "c" mu' <= mu after removing a black bead; "d" the triple-removal drop.
// "b.corrected" is mu - 2J(n-1) <= mu': the removed bead sits in 2(n-1)
// ordered pairs, each worth at most J.
struct MixtureLawReport {
  std::map<std::string, std::uint64_t> cases, violations;
  std::map<std::string, std::string> first_witness;
  std::uint64_t necklaces = 0;

  bool ok(const std::string& clause) const {
    auto it = violations.find(clause);
    return it == violations.end() || it->second == 0;
  }
  bool all_stated_ok() const {
    for (const char* c : {"a", "b.pairs", "b.upper", "b.lower", "c", "d"})
      if (!ok(c)) return false;
    return true;
  }
  void record(const std::string& clause, bool holds, const std::string& witness) {
    ++cases[clause];
    violations[clause] += 0;
    if (holds) return;
    ++violations[clause];
    first_witness.emplace(clause, witness);
  }
};

// Checks every clause on `o`. With `sample` set, only that many removals of each
// kind are tried (positions drawn from rng) instead of all of them.
inline void check_mixture_laws(const Necklace& o, std::size_t J, MixtureLawReport& rep, std::size_t sample = 0,
                               std::mt19937_64* rng = nullptr) {
  ++rep.necklaces;
  const std::size_t size = o.size();
  const std::uint64_t n = o.count(Bead::White);
  const std::uint64_t mu = mixture(o, J);
  auto tag = [&](const std::string& extra) { return o.str() + " J=" + std::to_string(J) + extra; };
  rep.record("a", mu <= J * (n * n - n), tag(""));

  std::vector<std::size_t> whites, blacks;
  for (std::size_t i = 0; i < size; ++i) (o[i] == Bead::White ? whites : blacks).push_back(i);
  auto choose = [&](const std::vector<std::size_t>& from) {
    if (!sample || !rng || from.empty()) return from;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < sample; ++k) out.push_back(from[(*rng)() % from.size()]);
    return out;
  };

  for (std::size_t v : choose(whites)) {
    const Necklace o2 = remove_bead(o, v);
    const std::uint64_t mu2 = mixture(o2, J);
    const std::string w = tag(" remove " + std::to_string(v) + " mu=" + std::to_string(mu) + " mu'=" + std::to_string(mu2));
    bool pairs = true;
    for (std::size_t j = 1; j <= J; ++j) pairs = pairs && pair_count(o2, j) <= pair_count(o, j);
    rep.record("b.pairs", pairs, w);
    rep.record("b.upper", mu2 <= mu, w);
    rep.record("b.lower", mu < J * n + mu2, w);
    rep.record("b.corrected", mu <= 2 * J * (n - 1) + mu2, w);
  }
  for (std::size_t v : choose(blacks)) {
    const std::uint64_t mu2 = mixture(remove_bead(o, v), J);
    rep.record("c", mu2 <= mu, tag(" remove " + std::to_string(v)));
  }

  // triples: v2 strictly between v1 and v3 clockwise, at most J blacks strictly inside v1 -> v3
  const std::size_t nb = blacks.size();
  if (nb < 3) return;
  ArcCounter arcs(o);
  auto try_triple = [&](std::size_t a, std::size_t b, std::size_t c) {
    const std::size_t v1 = blacks[a], v2 = blacks[b], v3 = blacks[c];
    if (arcs.inside(v1, v3) > J) return;
    const TripleRemoval t = triple_removal(o, v1, v2, v3, J);
    rep.record("d", t.ok, tag(" triple " + std::to_string(v1) + "," + std::to_string(v2) + "," + std::to_string(v3)));
  };
  if (sample && rng) {
    for (std::size_t k = 0; k < sample; ++k) {
      // v1 then two later blacks in clockwise order
      const std::size_t a = (*rng)() % nb;
      const std::size_t gap2 = 1 + (*rng)() % (nb - 2);
      const std::size_t gap3 = gap2 + 1 + (*rng)() % (nb - 1 - gap2);
      try_triple(a, (a + gap2) % nb, (a + gap3) % nb);
    }
    return;
  }
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t g2 = 1; g2 + 1 < nb; ++g2)
      for (std::size_t g3 = g2 + 1; g3 < nb; ++g3) try_triple(a, (a + g2) % nb, (a + g3) % nb);
}

// Every bead sequence of length <= max_beads (all rotations included) for J = 1..max_J.
inline MixtureLawReport mixture_laws_exhaustive(std::size_t max_beads, std::size_t max_J) {
  MixtureLawReport rep;
  for (std::size_t len = 0; len <= max_beads; ++len)
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
      std::vector<Bead> b(len);
      for (std::size_t i = 0; i < len; ++i) b[i] = (mask >> i) & 1 ? Bead::Black : Bead::White;
      const Necklace o(std::move(b));
      for (std::size_t J = 1; J <= max_J; ++J) check_mixture_laws(o, J, rep);
    }
  return rep;
}

// Random necklaces of 1..max_beads beads with random black density and J in 1..max_J.
inline MixtureLawReport mixture_laws_fuzz(std::size_t trials, std::size_t max_beads, std::size_t max_J, std::uint64_t seed,
                                          std::size_t sample = 4) {
  MixtureLawReport rep;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t len = 1 + rng() % max_beads;
    const std::uint64_t density = 1 + rng() % 99;
    std::vector<Bead> b(len);
    for (auto& x : b) x = rng() % 100 < density ? Bead::Black : Bead::White;
    check_mixture_laws(Necklace(std::move(b)), 1 + rng() % max_J, rep, sample, &rng);
  }
  return rep;
}

}  // namespace smach
