#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "surv/tree.hpp"

namespace surv::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Random subset of {0..b-1} with size in [lo, hi], sorted.
inline std::vector<Letter> random_subset(Rng& rng, std::size_t b, std::size_t lo, std::size_t hi) {
  std::vector<Letter> all(b);
  for (std::size_t i = 0; i < b; ++i) all[i] = static_cast<Letter>(i);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(pick(rng, lo, std::min(hi, b)));
  std::sort(all.begin(), all.end());
  return all;
}

// Grows a tree to depth d; kids(w) picks the child set of node w.
inline FiniteTree grow(std::optional<Letter> bound, std::size_t d,
                       const std::function<std::vector<Letter>(const Word&)>& kids) {
  std::vector<Word> words{Word{}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    Word w = words[i];
    if (w.size() >= d) continue;
    for (Letter c : kids(w)) words.push_back(w.child(c));
  }
  return FiniteTree::closure_of(words, bound, d);
}

// Every node below d has between 1 and k children from {0..b-1}.
inline FiniteTree random_k_tree(Rng& rng, std::size_t b, std::size_t k, std::size_t d) {
  return grow(static_cast<Letter>(b), d, [&](const Word&) { return random_subset(rng, b, 1, k); });
}

// Every node below d has 1 or k children, entries below b.
inline FiniteTree random_k_branching(Rng& rng, std::size_t b, std::size_t k, std::size_t d,
                                     std::optional<Letter> bound) {
  return grow(bound, d, [&](const Word&) {
    return pick(rng, 0, 1) ? random_subset(rng, b, k, k) : random_subset(rng, b, 1, 1);
  });
}

// Any prefix-closed subtree of b^{<=d}.
inline FiniteTree random_tree(Rng& rng, std::size_t b, std::size_t d) {
  return grow(static_cast<Letter>(b), d, [&](const Word&) { return random_subset(rng, b, 0, b); });
}

// All nonempty subsets of {0..b-1} of size at most k, as sorted vectors.
inline std::vector<std::vector<Letter>> small_subsets(std::size_t b, std::size_t k) {
  std::vector<std::vector<Letter>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << b); ++mask) {
    std::vector<Letter> s;
    for (std::size_t i = 0; i < b; ++i)
      if (mask >> i & 1) s.push_back(static_cast<Letter>(i));
    if (s.size() <= k) out.push_back(s);
  }
  return out;
}

// Calls f on every k-tree over b of depth exactly d (each node below d has
// 1..k children).
inline void for_each_k_tree(std::size_t b, std::size_t k, std::size_t d, const std::function<void(const FiniteTree&)>& f) {
  auto subsets = small_subsets(b, k);
  std::vector<Word> words{Word{}};
  // Frontier of nodes still to be given children, in breadth-first order.
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    while (i < words.size() && words[i].size() >= d) ++i;
    if (i == words.size()) {
      f(FiniteTree::from_words(words, static_cast<Letter>(b), d));
      return;
    }
    Word w = words[i];
    for (const auto& s : subsets) {
      std::size_t mark = words.size();
      for (Letter c : s) words.push_back(w.child(c));
      rec(i + 1);
      words.resize(mark);
    }
  };
  rec(0);
}

// Every onto map {0..m-1} -> {0..n-1}.
inline std::vector<Surjection> all_surjections(std::size_t m, std::size_t n) {
  std::vector<Surjection> out;
  std::vector<Letter> t(m, 0);
  while (true) {
    std::vector<bool> hit(n, false);
    for (Letter v : t) hit[v] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool x) { return x; })) out.emplace_back(t, static_cast<Letter>(n));
    std::size_t i = m;
    while (i > 0 && t[i - 1] + 1 == n) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

// All words over {0..b-1} of length n, lexicographic.
inline std::vector<Word> all_words(std::size_t b, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (std::size_t c = 0; c < b; ++c) next.push_back(w.child(static_cast<Letter>(c)));
    out = std::move(next);
  }
  return out;
}

}  // namespace surv::testing
