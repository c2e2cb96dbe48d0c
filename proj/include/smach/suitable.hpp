#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace smach {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using json = nlohmann::json;

struct AlphaSpec {
  Rational alpha;
  BigInt s;      // floor(alpha)
  Rational beta;  // (alpha - s) / 3

  explicit AlphaSpec(const Rational& a) : alpha(a) {
    if (a < 2) throw std::invalid_argument("alpha must be at least 2");
    s = numerator(a) / denominator(a);
    beta = (a - Rational(s)) / 3;
  }
};

// Binary rational floor(beta * 2^m) / 2^m, within 2^-m of beta, m digits.
inline Rational approximate_beta(const AlphaSpec& a, unsigned m) {
  if (m < 1) throw std::invalid_argument("approximate_beta needs m >= 1");
  const BigInt scale = BigInt(1) << m;
  const Rational scaled = a.beta * Rational(scale);
  return Rational(numerator(scaled) / denominator(scaled), scale);
}

inline unsigned floor_log2(const BigInt& n) {
  if (n < 1) throw std::invalid_argument("floor_log2 of a non-positive number");
  return static_cast<unsigned>(boost::multiprecision::msb(n));
}

inline BigInt integer_cbrt(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("integer_cbrt of a negative number");
  BigInt lo = 0, hi = BigInt(1) << (floor_log2(n + 1) / 3 + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (mid * mid * mid <= n) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

// Steps of the leftmost rewrite |0 -> 0||, 1 -> 0|, 0 -> (empty) that turns a
// binary word into unary. Reading a digit d with M marks already produced costs
// M crossings, d conversions and one deletion, and leaves 2M + d marks.
inline BigInt unary_rewrite_steps(const std::string& bits) {
  BigInt marks = 0, steps = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("binary word with a non-binary digit");
    const int d = c - '0';
    steps += marks + d + 1;
    marks = 2 * marks + d;
  }
  return steps;
}

struct PipelineTrace {
  BigInt r;
  unsigned m = 0;
  Rational beta_m;
  BigInt gamma;
  BigInt value;
};

inline constexpr long kFloorValue = 5;

// r = floor(n^(1/3)), m = floor(log2 log2 r), gamma = floor(beta_m floor(log2 n)),
// f(n) = max(5, steps of rewriting 1^gamma (read as binary) into unary).
inline PipelineTrace pipeline_trace(const AlphaSpec& a, const BigInt& n) {
  if (n < 1) throw std::invalid_argument("pipeline_f needs n >= 1");
  PipelineTrace t;
  t.r = integer_cbrt(n);
  t.value = kFloorValue;
  if (t.r < 4) return t;  // m would be 0
  t.m = floor_log2(BigInt(floor_log2(t.r)));
  t.beta_m = approximate_beta(a, t.m);
  const Rational prod = t.beta_m * Rational(BigInt(floor_log2(n)));
  t.gamma = numerator(prod) / denominator(prod);
  // 1^gamma: every digit is 1, so the steps are 2^gamma + gamma - 1.
  const BigInt steps = (BigInt(1) << static_cast<unsigned>(t.gamma)) + t.gamma - 1;
  t.value = std::max(BigInt(kFloorValue), steps);
  return t;
}

inline BigInt pipeline_f(const AlphaSpec& a, const BigInt& n) { return pipeline_trace(a, n).value; }

struct FunctionTable {
  std::vector<BigInt> values;  // f(1..n_max)
  std::string provenance;

  std::size_t n_max() const { return values.size(); }
  const BigInt& at(std::size_t n) const { return values.at(n - 1); }
};

inline FunctionTable pipeline_table(const AlphaSpec& a, std::size_t n_max) {
  FunctionTable t;
  t.provenance = "pipeline alpha=" + a.alpha.str();
  t.values.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) t.values.push_back(pipeline_f(a, n));
  return t;
}

// g(n) = f(n)^3.
inline FunctionTable g_table(const FunctionTable& f) {
  FunctionTable g{{}, "f^3 of " + f.provenance};
  for (const auto& v : f.values) g.values.push_back(v * v * v);
  return g;
}

// F(n) = n^s f(n)^3.
inline FunctionTable growth_table(const FunctionTable& f, unsigned s) {
  FunctionTable out{{}, "n^" + std::to_string(s) + " f^3 of " + f.provenance};
  for (std::size_t n = 1; n <= f.n_max(); ++n) out.values.push_back(boost::multiprecision::pow(BigInt(n), s) * f.at(n) * f.at(n) * f.at(n));
  return out;
}

// Least-squares slope of log f(n) against log n over n = floor(2^(k/per_octave)),
// k from lo_exp*per_octave to hi_exp*per_octave.
inline double fitted_exponent(const AlphaSpec& a, unsigned lo_exp, unsigned hi_exp, unsigned per_octave = 8) {
  auto log2_big = [](const BigInt& v) {
    const unsigned b = floor_log2(v);
    const unsigned shift = b > 60 ? b - 60 : 0;
    return static_cast<double>(shift) + std::log2(static_cast<double>(static_cast<std::uint64_t>(v >> shift)));
  };
  std::vector<double> xs, ys;
  for (unsigned k = lo_exp * per_octave; k <= hi_exp * per_octave; ++k) {
    // n = floor(2^(k/per_octave)) in exact arithmetic: largest n with n^per_octave <= 2^k
    const BigInt target = BigInt(1) << k;
    BigInt lo = BigInt(1) << (k / per_octave), hi = lo * 2;
    while (lo < hi) {
      BigInt mid = (lo + hi + 1) / 2;
      if (boost::multiprecision::pow(mid, per_octave) <= target) lo = mid;
      else hi = mid - 1;
    }
    xs.push_back(log2_big(lo));
    ys.push_back(log2_big(pipeline_f(a, lo)));
  }
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

// ---- suitability on a finite table ----------------------------------------------------

// A ratio sequence counts as bounded on the table when its maximum over
// [1, n_max] is at most twice its maximum over [1, n_max/2]; an unbounded
// one such as n^2 quadruples.
inline constexpr int kBoundedSlack = 2;

struct RatioScan {
  Rational max_full, max_half;
  std::size_t argmax = 0;
  bool bounded() const { return max_full <= kBoundedSlack * max_half; }
  json to_json() const { return {{"max", max_full.str()}, {"max_first_half", max_half.str()}, {"at_n", argmax}, {"bounded", bounded()}}; }
};

struct SuitableReport {
  RatioScan cube;                  // f(n)^3 / n
  std::vector<std::pair<unsigned, RatioScan>> scaling;  // c -> f(cn)/f(n)
  bool monotone = true;
  std::optional<std::size_t> first_decrease;

  bool pass() const {
    if (!monotone || !cube.bounded()) return false;
    for (const auto& [c, s] : scaling)
      if (!s.bounded()) return false;
    return true;
  }
  json to_json() const {
    json sc = json::object();
    for (const auto& [c, s] : scaling) sc[std::to_string(c)] = s.to_json();
    json j = {{"pass", pass()}, {"cube_over_n", cube.to_json()}, {"scaling", sc}, {"monotone", monotone}};
    if (first_decrease) j["first_decrease_at"] = *first_decrease;
    return j;
  }
};

inline SuitableReport check_suitable(const FunctionTable& f, const std::vector<unsigned>& cs = {2, 3, 4}) {
  if (f.n_max() < 2) throw std::invalid_argument("check_suitable needs a table with at least two values");
  SuitableReport rep;
  const std::size_t half = f.n_max() / 2;
  auto scan = [&](auto ratio, std::size_t limit, std::size_t half_limit) {
    RatioScan s;
    for (std::size_t n = 1; n <= limit; ++n) {
      const Rational r = ratio(n);
      if (n == 1 || r > s.max_full) {
        s.max_full = r;
        s.argmax = n;
      }
      if (n <= std::max<std::size_t>(1, half_limit) && (n == 1 || r > s.max_half)) s.max_half = r;
    }
    return s;
  };
  rep.cube = scan([&](std::size_t n) { return Rational(f.at(n) * f.at(n) * f.at(n), BigInt(n)); }, f.n_max(), half);
  for (unsigned c : cs) {
    const std::size_t limit = f.n_max() / c;
    if (limit < 1) continue;
    rep.scaling.push_back({c, scan([&](std::size_t n) { return Rational(f.at(c * n), f.at(n)); }, limit, limit / 2)});
  }
  for (std::size_t n = 2; n <= f.n_max(); ++n)
    if (f.at(n) < f.at(n - 1)) {
      rep.monotone = false;
      rep.first_decrease = n;
      break;
    }
  return rep;
}

struct DxReport {
  std::size_t samples = 0, failures = 0;
  std::optional<std::pair<std::size_t, std::size_t>> first_failure;  // (x, d)
  bool pass() const { return failures == 0; }
};

// F(x) = x^2 g(x); checks x (F(x) - F(x-d)) >= d F(x) at every (x, d), 0 <= d < x.
inline DxReport check_dx(const FunctionTable& g, const std::vector<std::pair<std::size_t, std::size_t>>& samples) {
  DxReport rep;
  auto F = [&](std::size_t x) { return BigInt(x) * BigInt(x) * g.at(x); };
  for (const auto& [x, d] : samples) {
    if (x < 1 || x > g.n_max() || d >= x) throw std::invalid_argument("check_dx: sample outside 0 <= d < x <= n_max");
    ++rep.samples;
    const BigInt fx = F(x);
    const BigInt lower = fx - F(x - d);
    if (BigInt(x) * lower < BigInt(d) * fx) {
      ++rep.failures;
      if (!rep.first_failure) rep.first_failure = std::make_pair(x, d);
    }
  }
  return rep;
}

// Random non-decreasing table of positive integers.
inline FunctionTable random_monotone_table(std::size_t n_max, std::mt19937_64& rng) {
  FunctionTable t{{}, "random monotone"};
  BigInt v = 1 + rng() % 5;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (rng() % 3 == 0) v += rng() % 7;
    t.values.push_back(v);
  }
  return t;
}

}  // namespace smach
