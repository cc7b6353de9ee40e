#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace surv {

using Letter = std::uint32_t;

// A finite sequence of naturals: a node of b^<w or w^<w.
class Word {
public:
  Word() = default;
  Word(std::initializer_list<Letter> init) : entries_(init) {}
  explicit Word(std::vector<Letter> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Letter operator[](std::size_t i) const { return entries_[i]; }
  Letter back() const { return entries_.back(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::span<const Letter> entries() const { return entries_; }

  Word child(Letter i) const {
    Word w = *this;
    w.entries_.push_back(i);
    return w;
  }
  Word prefix(std::size_t n) const {
    return Word(std::vector<Letter>(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size()))));
  }
  Word parent() const { return prefix(size() == 0 ? 0 : size() - 1); }
  Word concat(const Word& tail) const {
    Word w = *this;
    w.entries_.insert(w.entries_.end(), tail.begin(), tail.end());
    return w;
  }
  void push_back(Letter i) { entries_.push_back(i); }

  bool is_prefix_of(const Word& other) const;
  bool comparable(const Word& other) const { return is_prefix_of(other) || other.is_prefix_of(*this); }
  Letter max_entry() const;

  // Space separated entries; the empty word renders as "".
  std::string to_string() const;
  // Angle-bracket form for diagnostics and DOT labels.
  std::string pretty() const;
  static Word parse(const std::string& text);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.entries_ <=> b.entries_; }

private:
  std::vector<Letter> entries_;
};

// Shortest-then-lexicographic order; the canonical tie-break order for searches.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

Word zeros(std::size_t n);

}  // namespace surv
