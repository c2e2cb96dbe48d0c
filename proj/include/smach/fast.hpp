#pragma once

#include <stdexcept>
#include <vector>

#include "smach/engine.hpp"
#include "smach/transforms/common.hpp"

namespace smach {

// In-place rule application on standard-base words of a machine whose parts
// all have one-letter bases. Meant for exhaustive searches: apply() records an
// undo log so a depth-first search can backtrack without copying words.
class FastRunner {
 public:
  explicit FastRunner(const SMachine& m) : m_(m) {
    if (!has_simple_parts(m)) throw std::invalid_argument("FastRunner needs one-letter parts");
    const std::size_t N = m.N();
    for (const auto& th : m.rule_letters()) {
      const Rule& r = m.rule(th);
      Compiled c;
      c.from.resize(N + 1);
      c.to.resize(N + 1);
      c.left.resize(N + 1);
      c.right.resize(N + 1);
      for (const auto& p : r.parts) {
        auto a = *simple_side(th.sign > 0 ? p.from : p.to);
        auto b = *simple_side(th.sign > 0 ? p.to : p.from);
        const std::size_t j = a.q.alphabet;
        c.from[j] = a.q;
        c.to[j] = b.q;
        Word l = invert(a.v) * b.v, rr = b.u * invert(a.u);
        c.left[j].assign(l.begin(), l.end());
        c.right[j].assign(rr.syms().rbegin(), rr.syms().rend());
      }
      c.mode.assign(N + 1, Mode::Full);
      for (std::size_t j = 1; j <= N; ++j) {
        std::size_t n = r.permitted_count(j);
        c.mode[j] = n == 0 ? Mode::Locked : n == m.hw.tape_size(j) ? Mode::Full : Mode::Partial;
      }
      c.permit = &r.permit;
      rules_.push_back(std::move(c));
    }
  }

  void load(const Word& w) {
    auto a = parse_admissible(m_.hw, w);
    if (!is_standard_base(m_, a.base)) throw std::invalid_argument("FastRunner needs a standard-base word");
    states_ = state_letters(w);
    const std::size_t cap = 2 * w.size() + 512;
    sectors_.assign(m_.N() + 1, Sector{});
    for (std::size_t j = 1; j <= m_.N(); ++j) {
      Sector& s = sectors_[j];
      s.buf.resize(cap);
      s.b = s.e = cap / 2;
      for (const auto& x : a.sectors[j - 1]) s.buf[s.e++] = x;
    }
    alen_ = smach::a_length(w);
    log_.clear();
  }

  // Applies the rule letter (index into rule_letters()); on success returns
  // true and pushes an undo mark.
  bool apply(std::size_t letter) {
    const Compiled& c = rules_[letter];
    const std::size_t N = m_.N();
    for (std::size_t j = 0; j <= N; ++j)
      if (states_[j] != c.from[j]) return false;
    for (std::size_t j = 1; j <= N; ++j) {
      const Sector& s = sectors_[j];
      if (c.mode[j] == Mode::Full) continue;
      if (c.mode[j] == Mode::Locked) {
        if (s.e != s.b) return false;
        continue;
      }
      const auto& row = (*c.permit)[j];
      for (std::size_t i = s.b; i < s.e; ++i)
        if (!row[s.buf[i].letter.symbol]) return false;
    }
    log_.push_back({Op::Mark, 0, {}});
    for (std::size_t j = 0; j <= N; ++j) {
      if (c.from[j] != c.to[j]) {
        log_.push_back({Op::State, j, {states_[j], 1}});
        states_[j] = c.to[j];
      }
      for (const auto& x : c.left[j]) push_back(j, x);
      for (const auto& x : c.right[j]) push_front(j + 1, x);
    }
    return true;
  }

  void undo() {
    while (!log_.empty()) {
      Entry e = log_.back();
      log_.pop_back();
      Sector& s = sectors_[e.sector];
      switch (e.op) {
        case Op::Mark:
          return;
        case Op::State:
          states_[e.sector] = e.sym.letter;
          break;
        case Op::PushBack:
          --s.e;
          --alen_;
          break;
        case Op::PopBack:
          s.buf[s.e++] = e.sym;
          ++alen_;
          break;
        case Op::PushFront:
          ++s.b;
          --alen_;
          break;
        case Op::PopFront:
          s.buf[--s.b] = e.sym;
          ++alen_;
          break;
      }
    }
  }

  std::size_t a_length() const { return alen_; }
  const std::vector<Letter>& states() const { return states_; }
  std::size_t sector_size(std::size_t j) const { return sectors_[j].e - sectors_[j].b; }
  Word sector(std::size_t j) const {
    const Sector& s = sectors_[j];
    return Word(std::vector<Sym>(s.buf.begin() + static_cast<std::ptrdiff_t>(s.b), s.buf.begin() + static_cast<std::ptrdiff_t>(s.e)));
  }
  Word word() const {
    std::vector<Word> secs;
    for (std::size_t j = 1; j <= m_.N(); ++j) secs.push_back(sector(j));
    return standard_word(states_, secs);
  }
  std::size_t letter_count() const { return rules_.size(); }

 private:
  enum class Mode { Full, Locked, Partial };
  enum class Op { Mark, State, PushBack, PopBack, PushFront, PopFront };
  struct Compiled {
    std::vector<Letter> from, to;
    std::vector<std::vector<Sym>> left, right;
    std::vector<Mode> mode;
    const std::vector<std::vector<char>>* permit = nullptr;
  };
  struct Sector {
    std::vector<Sym> buf;
    std::size_t b = 0, e = 0;
  };
  struct Entry {
    Op op;
    std::size_t sector;
    Sym sym;
  };

  void push_back(std::size_t j, const Sym& x) {
    Sector& s = sectors_[j];
    if (s.e > s.b && s.buf[s.e - 1].inverse_of(x)) {
      log_.push_back({Op::PopBack, j, s.buf[--s.e]});
      --alen_;
    } else {
      if (s.e == s.buf.size()) throw std::length_error("FastRunner sector overflow");
      s.buf[s.e++] = x;
      log_.push_back({Op::PushBack, j, x});
      ++alen_;
    }
  }
  void push_front(std::size_t j, const Sym& x) {
    Sector& s = sectors_[j];
    if (s.e > s.b && s.buf[s.b].inverse_of(x)) {
      log_.push_back({Op::PopFront, j, s.buf[s.b++]});
      --alen_;
    } else {
      if (s.b == 0) throw std::length_error("FastRunner sector overflow");
      s.buf[--s.b] = x;
      log_.push_back({Op::PushFront, j, x});
      ++alen_;
    }
  }

  const SMachine& m_;
  std::vector<Compiled> rules_;
  std::vector<Letter> states_;
  std::vector<Sector> sectors_;
  std::vector<Entry> log_;
  std::size_t alen_ = 0;
};

}  // namespace smach
