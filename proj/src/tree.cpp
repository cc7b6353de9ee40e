#include "surv/tree.hpp"

#include <algorithm>

namespace surv {

std::string to_string(TriState t) {
  switch (t) {
    case TriState::In: return "in";
    case TriState::Out: return "out";
    case TriState::Undecided: return "undecided";
  }
  return "?";
}

FiniteTree FiniteTree::from_words(const std::vector<Word>& words, std::optional<Letter> alphabet_bound,
                                  std::size_t depth) {
  FiniteTree t;
  t.bound_ = alphabet_bound;
  t.depth_ = depth;
  for (const auto& w : words) {
    if (w.size() > depth)
      throw TreeError("word " + w.pretty() + " is longer than depth " + std::to_string(depth));
    if (alphabet_bound && !w.empty() && w.max_entry() >= *alphabet_bound)
      throw TreeError("word " + w.pretty() + " leaves alphabet " + std::to_string(*alphabet_bound));
    t.children_.try_emplace(w);
  }
  for (auto& [w, kids] : t.children_) {
    if (w.empty()) continue;
    auto parent = t.children_.find(w.parent());
    if (parent == t.children_.end())
      throw TreeError("tree is not prefix-closed: " + w.pretty() + " has no parent");
    parent->second.push_back(w.back());
  }
  for (auto& [w, kids] : t.children_) std::sort(kids.begin(), kids.end());
  return t;
}

FiniteTree FiniteTree::closure_of(const std::vector<Word>& words, std::optional<Letter> alphabet_bound,
                                  std::size_t depth) {
  std::set<Word> all;
  for (const auto& w : words)
    for (std::size_t n = 0; n <= w.size(); ++n) all.insert(w.prefix(n));
  return from_words(std::vector<Word>(all.begin(), all.end()), alphabet_bound, depth);
}

FiniteTree FiniteTree::full(Letter b, std::size_t depth) {
  std::vector<Word> words{Word{}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() == depth) continue;
    for (Letter c = 0; c < b; ++c) words.push_back(words[i].child(c));
  }
  return from_words(words, b, depth);
}

const std::vector<Letter>& FiniteTree::children(const Word& w) const {
  auto it = children_.find(w);
  if (it == children_.end()) throw TreeError("children of non-member " + w.pretty());
  return it->second;
}

std::vector<Word> FiniteTree::nodes_shortlex() const {
  std::vector<Word> out;
  out.reserve(children_.size());
  for (const auto& [w, kids] : children_) out.push_back(w);
  std::stable_sort(out.begin(), out.end(), ShortLex{});
  return out;
}

std::vector<Word> FiniteTree::level(std::size_t n) const {
  std::vector<Word> out;
  for (const auto& [w, kids] : children_)
    if (w.size() == n) out.push_back(w);
  return out;
}

std::vector<Word> FiniteTree::extensions(const Word& w) const {
  std::vector<Word> out;
  for (auto it = children_.lower_bound(w); it != children_.end() && w.is_prefix_of(it->first); ++it)
    out.push_back(it->first);
  std::stable_sort(out.begin(), out.end(), ShortLex{});
  return out;
}

std::vector<Word> FiniteTree::leaves_above(const Word& w) const {
  std::vector<Word> out;
  for (auto it = children_.lower_bound(w); it != children_.end() && w.is_prefix_of(it->first); ++it)
    if (it->first.size() == depth_) out.push_back(it->first);
  return out;
}

Word FiniteTree::least_leaf_above(const Word& w) const {
  Word cur = w;
  for (;;) {
    const auto& kids = children(cur);
    if (kids.empty()) return cur;
    cur = cur.child(kids.front());
  }
}

FiniteTree FiniteTree::through(const Word& w) const {
  std::vector<Word> keep;
  for (const auto& [node, kids] : children_)
    if (node.comparable(w)) keep.push_back(node);
  return from_words(keep, bound_, depth_);
}

std::string ShapeViolation::describe() const {
  return "node " + node.pretty() + " has " + std::to_string(observed_child_count) + " children; required " +
         required;
}

Surjection::Surjection(std::vector<Letter> table, Letter codomain_size)
    : table_(std::move(table)), codomain_(codomain_size) {
  if (codomain_ < 2 || table_.size() < codomain_)
    throw std::invalid_argument("surjection needs domain_size >= codomain_size >= 2");
  std::vector<bool> hit(codomain_, false);
  for (Letter v : table_) {
    if (v >= codomain_) throw std::invalid_argument("surjection value " + std::to_string(v) + " out of range");
    hit[v] = true;
  }
  for (Letter v = 0; v < codomain_; ++v)
    if (!hit[v]) throw std::invalid_argument("map is not onto: " + std::to_string(v) + " has no preimage");
}

Surjection Surjection::identity(Letter n) {
  std::vector<Letter> table(n);
  for (Letter i = 0; i < n; ++i) table[i] = i;
  return Surjection(std::move(table), n);
}

Letter Surjection::operator()(Letter i) const {
  if (i >= table_.size()) throw std::out_of_range("entry " + std::to_string(i) + " outside surjection domain");
  return table_[i];
}

TriState contains(const FiniteTree& t, const Word& w, std::size_t) {
  return t.contains(w) ? TriState::In : TriState::Out;
}

std::vector<Letter> children(const FiniteTree& t, const Word& w, Letter bound) {
  std::vector<Letter> out;
  for (Letter c : t.children(w))
    if (c < bound) out.push_back(c);
  return out;
}

namespace {

template <typename Ok>
ShapeCheck check_counts(const FiniteTree& t, std::size_t d, const std::string& required, Ok ok) {
  for (const auto& w : t.nodes_shortlex()) {
    if (w.size() >= d) continue;
    std::size_t c = t.child_count(w);
    if (!ok(w, c)) return ShapeViolation{w, c, required};
  }
  return std::nullopt;
}

}  // namespace

ShapeCheck is_k_tree_to_depth(const FiniteTree& t, std::size_t k, std::size_t d) {
  return check_counts(t, d, "between 1 and " + std::to_string(k) + " children",
                      [k](const Word&, std::size_t c) { return c >= 1 && c <= k; });
}

ShapeCheck is_k_branching_to_depth(const FiniteTree& t, std::size_t k, std::size_t d) {
  return check_counts(t, d, "exactly 1 or " + std::to_string(k) + " children",
                      [k](const Word&, std::size_t c) { return c == 1 || c == k; });
}

ShapeCheck is_accelerating_to_depth(const FiniteTree& t, std::size_t d) {
  for (const auto& w : t.nodes_shortlex()) {
    if (w.size() >= d) continue;
    std::size_t c = t.child_count(w);
    if (c == 0) return ShapeViolation{w, 0, "at least 1 child below the inspection depth"};
    if (c < 2) continue;
    std::size_t splits = 0;
    for (std::size_t n = 0; n < w.size(); ++n)
      if (t.child_count(w.prefix(n)) >= 2) ++splits;
    if (c <= splits + 2)
      return ShapeViolation{w, c, "more than " + std::to_string(splits + 2) + " children (" +
                                      std::to_string(splits) + " splitting prefixes)"};
  }
  return std::nullopt;
}

Word map_path(const Surjection& g, const Word& a) {
  Word out;
  for (Letter x : a) out.push_back(g(x));
  return out;
}

FiniteTree pushforward_preimage(const FiniteTree& t, const Surjection& g) {
  if (!t.alphabet_bound() || *t.alphabet_bound() != g.codomain_size())
    throw TreeError("alphabet mismatch: tree alphabet does not match surjection codomain " +
                    std::to_string(g.codomain_size()));
  std::vector<Word> out;
  if (t.empty()) return FiniteTree::from_words(out, g.domain_size(), t.depth());
  std::vector<std::pair<Word, Word>> frontier{{Word{}, Word{}}};
  while (!frontier.empty()) {
    auto [w, image] = std::move(frontier.back());
    frontier.pop_back();
    out.push_back(w);
    if (w.size() == t.depth()) continue;
    for (Letter i = 0; i < g.domain_size(); ++i) {
      Word next_image = image.child(g(i));
      if (t.contains(next_image)) frontier.emplace_back(w.child(i), std::move(next_image));
    }
  }
  return FiniteTree::from_words(out, g.domain_size(), t.depth());
}

FiniteTree embed_branching(const FiniteTree& t, std::size_t s, std::size_t k, std::size_t d) {
  if (k < s) throw TreeError("embed_branching needs k >= s");
  if (auto v = is_k_branching_to_depth(t, s, d))
    throw TreeError("input is not " + std::to_string(s) + "-branching: " + v->describe());
  std::vector<Word> out;
  t.for_each([&](const Word& w, const std::vector<Letter>&) { out.push_back(w); });
  for (const auto& w : t.nodes_shortlex()) {
    if (w.size() >= d) continue;
    const auto& kids = t.children(w);
    if (kids.size() < 2) continue;
    std::size_t added = 0;
    for (Letter c = 0; added < k - kids.size(); ++c) {
      if (std::binary_search(kids.begin(), kids.end(), c)) continue;
      out.push_back(w.child(c).concat(zeros(d - w.size() - 1)));
      ++added;
    }
  }
  return FiniteTree::closure_of(out, std::nullopt, std::max(d, t.depth()));
}

FiniteTree restrict(const FiniteTree& t, Letter b) {
  std::vector<Word> out;
  t.for_each([&](const Word& w, const std::vector<Letter>&) {
    if (w.empty() || w.max_entry() < b) out.push_back(w);
  });
  return FiniteTree::from_words(out, b, t.depth());
}

Fraction covered_fraction(const FiniteTree& t, std::size_t d) {
  if (!t.alphabet_bound()) throw TreeError("covered_fraction needs an alphabet-bounded tree");
  std::int64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > (std::int64_t{1} << 52) / std::max<Letter>(*t.alphabet_bound(), 1))
      throw TreeError("b^d too large for exact counting");
    total *= *t.alphabet_bound();
  }
  return Fraction(static_cast<std::int64_t>(t.level(d).size()), total);
}

}  // namespace surv
