#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <vector>

namespace smach {

enum class Kind : std::uint8_t { State = 0, Tape = 1, Rule = 2 };

// Letters are interned integers. For state letters `alphabet` is the part
// index i of Q_i, for tape letters it is j in 1..N (sector alphabet Y_j), for
// rule letters it is 0 and `symbol` is the index in the positive rule list.
struct Letter {
  Kind kind = Kind::Tape;
  std::uint32_t alphabet = 0;
  std::uint32_t symbol = 0;

  auto operator<=>(const Letter&) const = default;
  bool operator==(const Letter&) const = default;
};

struct Sym {
  Letter letter;
  int sign = 1;

  Sym inverse() const { return {letter, -sign}; }
  bool inverse_of(const Sym& o) const { return letter == o.letter && sign == -o.sign; }
  auto operator<=>(const Sym&) const = default;
  bool operator==(const Sym&) const = default;
};

inline Letter state_letter(std::uint32_t part, std::uint32_t sym) { return {Kind::State, part, sym}; }
inline Letter tape_letter(std::uint32_t alph, std::uint32_t sym) { return {Kind::Tape, alph, sym}; }
inline Letter rule_letter(std::uint32_t idx) { return {Kind::Rule, 0, idx}; }

// A freely reduced word. Every constructor reduces.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Sym> syms) { for (const auto& s : syms) push(s); }
  explicit Word(const std::vector<Sym>& syms) { for (const auto& s : syms) push(s); }

  static Word letter(Letter l, int sign = 1) {
    Word w;
    w.syms_.push_back({l, sign});
    return w;
  }

  // Appends one symbol, cancelling against the last one if possible.
  void push(const Sym& s) {
    if (!syms_.empty() && syms_.back().inverse_of(s))
      syms_.pop_back();
    else
      syms_.push_back(s);
  }
  void append(const Word& w) { for (const auto& s : w.syms_) push(s); }

  std::size_t size() const { return syms_.size(); }
  bool empty() const { return syms_.empty(); }
  const Sym& operator[](std::size_t i) const { return syms_[i]; }
  const Sym& front() const { return syms_.front(); }
  const Sym& back() const { return syms_.back(); }
  auto begin() const { return syms_.begin(); }
  auto end() const { return syms_.end(); }
  const std::vector<Sym>& syms() const { return syms_; }

  // Subword [from, to). A factor of a reduced word is reduced.
  Word sub(std::size_t from, std::size_t to) const {
    Word w;
    w.syms_.assign(syms_.begin() + static_cast<std::ptrdiff_t>(from),
                   syms_.begin() + static_cast<std::ptrdiff_t>(to));
    return w;
  }

  std::size_t count(Kind k) const {
    std::size_t n = 0;
    for (const auto& s : syms_) n += s.letter.kind == k;
    return n;
  }

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word& o) const { return syms_ <=> o.syms_; }

  friend Word operator*(Word a, const Word& b) {
    a.append(b);
    return a;
  }

 private:
  std::vector<Sym> syms_;
};

// Free reduction of an arbitrary sequence.
inline Word reduce(const std::vector<Sym>& seq) { return Word(seq); }

inline Word invert(const Word& w) {
  Word r;
  for (auto it = w.syms().rbegin(); it != w.syms().rend(); ++it) r.push(it->inverse());
  return r;
}

// Letter-by-letter image under `renaming`; throws if a letter is unmapped.
inline Word copy_word(const Word& w, const std::map<Letter, Letter>& renaming) {
  Word r;
  for (const auto& s : w) {
    auto it = renaming.find(s.letter);
    if (it == renaming.end()) throw std::invalid_argument("copy_word: letter missing from renaming");
    r.push({it->second, s.sign});
  }
  return r;
}

inline std::size_t a_length(const Word& w) { return w.count(Kind::Tape); }

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || !w.front().inverse_of(w.back());
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& s : w) {
      std::uint64_t v = (static_cast<std::uint64_t>(s.letter.kind) << 62) ^
                        (static_cast<std::uint64_t>(s.letter.alphabet) << 40) ^
                        (static_cast<std::uint64_t>(s.letter.symbol) << 1) ^
                        static_cast<std::uint64_t>(s.sign > 0);
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace smach
