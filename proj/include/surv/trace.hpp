#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surv/tree.hpp"
#include "surv/word.hpp"

namespace surv {

class TraceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BoundExceeded : public TraceError {
public:
  BoundExceeded(std::size_t level, std::size_t size, std::size_t allowed)
      : TraceError("level " + std::to_string(level) + " has " + std::to_string(size) + " words, bound allows " +
                   std::to_string(allowed)),
        level_(level) {}
  std::size_t level() const { return level_; }

private:
  std::size_t level_;
};

// Size bound on trace levels: base^n ("pow") or a constant ("const").
struct LevelBound {
  enum class Kind { Pow, Const };
  Kind kind = Kind::Pow;
  std::size_t value = 3;

  static LevelBound pow(std::size_t base) { return {Kind::Pow, base}; }
  static LevelBound constant(std::size_t c) { return {Kind::Const, c}; }

  // Saturates instead of overflowing.
  std::size_t at(std::size_t n) const;
  std::string to_string() const;
  static LevelBound parse(const std::string& text);
  friend bool operator==(const LevelBound&, const LevelBound&) = default;
};

// Level-indexed word sets: levels(n) holds words of length n, prefix-coherent,
// each level within the bound.
class TraceTable {
public:
  static TraceTable from_levels(std::vector<std::set<Word>> levels, LevelBound bound);
  static TraceTable from_words(const std::vector<Word>& words, std::size_t depth, LevelBound bound);

  std::size_t depth() const { return levels_.size() - 1; }
  const LevelBound& bound() const { return bound_; }
  const std::set<Word>& level(std::size_t n) const { return levels_.at(n); }
  std::vector<Word> words_shortlex() const;
  // The textbook view: values occurring at position n among level n+1 words.
  std::set<Letter> position_values(std::size_t n) const;
  FiniteTree as_tree() const;

  friend bool operator==(const TraceTable&, const TraceTable&) = default;

private:
  TraceTable(std::vector<std::set<Word>> levels, LevelBound bound) : levels_(std::move(levels)), bound_(bound) {}
  std::vector<std::set<Word>> levels_;
  LevelBound bound_;
};

TraceTable from_tree(const FiniteTree& u, LevelBound bound);
bool goes_through(const Word& prefix, const TraceTable& tr);
TraceTable merge(const TraceTable& a, const TraceTable& b, LevelBound bound);

// "trace bound=pow:3 depth=4" header followed by the word list.
std::string write_trace(const TraceTable& tr);
TraceTable read_trace(const std::string& text);

}  // namespace surv
