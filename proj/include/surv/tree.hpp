#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surv/word.hpp"

namespace surv {

class TreeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class TriState { In, Out, Undecided };

std::string to_string(TriState t);

using Fraction = boost::rational<std::int64_t>;

// Explicit, prefix-closed finite tree. Immutable once built.
class FiniteTree {
public:
  FiniteTree() = default;

  // Throws TreeError unless `words` is prefix-closed, bounded by `alphabet_bound`
  // and of length at most `depth`.
  static FiniteTree from_words(const std::vector<Word>& words, std::optional<Letter> alphabet_bound,
                               std::size_t depth);
  // Adds every prefix of every word before validating.
  static FiniteTree closure_of(const std::vector<Word>& words, std::optional<Letter> alphabet_bound,
                               std::size_t depth);
  static FiniteTree full(Letter b, std::size_t depth);

  bool empty() const { return children_.empty(); }
  std::size_t size() const { return children_.size(); }
  std::size_t depth() const { return depth_; }
  std::optional<Letter> alphabet_bound() const { return bound_; }

  bool contains(const Word& w) const { return children_.count(w) != 0; }
  // Sorted child entries; TreeError if `w` is not a member.
  const std::vector<Letter>& children(const Word& w) const;
  std::size_t child_count(const Word& w) const { return children(w).size(); }

  std::vector<Word> nodes_shortlex() const;
  std::vector<Word> level(std::size_t n) const;
  // Members extending `w` (including `w`) in shortlex order.
  std::vector<Word> extensions(const Word& w) const;
  // Members of length `depth()` extending `w`.
  std::vector<Word> leaves_above(const Word& w) const;
  // Least path from `w` through least children until a childless node.
  Word least_leaf_above(const Word& w) const;
  // Nodes comparable with `w`.
  FiniteTree through(const Word& w) const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [w, kids] : children_) f(w, kids);
  }

  friend bool operator==(const FiniteTree& a, const FiniteTree& b) {
    return a.bound_ == b.bound_ && a.depth_ == b.depth_ && a.children_ == b.children_;
  }

private:
  std::optional<Letter> bound_;
  std::size_t depth_ = 0;
  std::map<Word, std::vector<Letter>> children_;
};

struct ShapeViolation {
  Word node;
  std::size_t observed_child_count = 0;
  std::string required;

  std::string describe() const;
};

using ShapeCheck = std::optional<ShapeViolation>;

class Surjection {
public:
  Surjection(std::vector<Letter> table, Letter codomain_size);
  static Surjection identity(Letter n);

  Letter domain_size() const { return static_cast<Letter>(table_.size()); }
  Letter codomain_size() const { return codomain_; }
  Letter operator()(Letter i) const;
  const std::vector<Letter>& table() const { return table_; }

private:
  std::vector<Letter> table_;
  Letter codomain_;
};

TriState contains(const FiniteTree& t, const Word& w, std::size_t stage = 0);
std::vector<Letter> children(const FiniteTree& t, const Word& w, Letter bound);

ShapeCheck is_k_tree_to_depth(const FiniteTree& t, std::size_t k, std::size_t d);
ShapeCheck is_k_branching_to_depth(const FiniteTree& t, std::size_t k, std::size_t d);
ShapeCheck is_accelerating_to_depth(const FiniteTree& t, std::size_t d);

Word map_path(const Surjection& g, const Word& a);
FiniteTree pushforward_preimage(const FiniteTree& t, const Surjection& g);
// Pads every s-way split of an s-branching tree up to k children.
FiniteTree embed_branching(const FiniteTree& t, std::size_t s, std::size_t k, std::size_t d);
FiniteTree restrict(const FiniteTree& t, Letter b);
Fraction covered_fraction(const FiniteTree& t, std::size_t d);

}  // namespace surv
