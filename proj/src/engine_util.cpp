#include "engine_util.hpp"

#include <algorithm>
#include <bit>

namespace surv::detail {

const NodeEvaluator::Info& NodeEvaluator::at(const Word& w) {
  auto it = memo_.find(w);
  if (it != memo_.end()) return it->second;
  Info info;
  info.values.resize(cap_);
  bool leading = true;
  for (std::size_t n = 0; n < cap_; ++n) {
    ++evaluations_;
    info.values[n] = f_.eval(w, n, fuel_);
    if (info.values[n]) {
      if (n < 64) info.mask |= std::uint64_t{1} << n;
      if (leading) {
        info.out.push_back(*info.values[n]);
        ++info.conv;
      }
    } else {
      leading = false;
    }
  }
  return memo_.emplace(w, std::move(info)).first->second;
}

std::optional<Word> first_split_above(const FiniteTree& t, const Word& w) {
  Word cur = w;
  while (true) {
    const auto& kids = t.children(cur);
    if (kids.empty()) return std::nullopt;
    if (kids.size() >= 2) return cur;
    cur = cur.child(kids[0]);
  }
}

std::vector<Word> maximal_above(const FiniteTree& t, const Word& w) {
  std::vector<Word> out;
  for (const auto& x : t.extensions(w))
    if (t.children(x).empty()) out.push_back(x);
  return out;
}

FiniteTree closure_like(const FiniteTree& base, const std::vector<Word>& leaves) {
  return FiniteTree::closure_of(leaves, base.alphabet_bound(), base.depth());
}

std::map<Word, std::uint64_t> reach_masks(const FiniteTree& t, const Word& root, NodeEvaluator& ev) {
  std::map<Word, std::uint64_t> masks;
  auto nodes = t.extensions(root);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const auto& kids = t.children(*it);
    std::uint64_t m = 0;
    if (kids.empty()) {
      m = ev.at(*it).mask;
    } else {
      for (Letter c : kids) m |= masks.at(it->child(c));
    }
    masks[*it] = m;
  }
  return masks;
}

std::optional<std::pair<Word, std::size_t>> totality_escape(const FiniteTree& t, const Word& root, NodeEvaluator& ev) {
  auto masks = reach_masks(t, root, ev);
  for (const auto& w : t.extensions(root)) {
    std::uint64_t missing = ev.full_mask() & ~masks.at(w);
    if (missing) return std::make_pair(w, static_cast<std::size_t>(std::countr_zero(missing)));
  }
  return std::nullopt;
}

TraceTable trace_of_outputs(const std::vector<Word>& outputs, std::size_t length, LevelBound bound) {
  std::vector<Word> words;
  for (const auto& o : outputs)
    for (std::size_t n = 0; n <= length; ++n) words.push_back(o.prefix(n));
  return TraceTable::from_words(words, length, bound);
}

ordered_json stage_params(std::size_t stages, std::size_t depth, std::size_t fuel) {
  ordered_json p;
  p["stages"] = stages;
  p["depth"] = depth;
  p["fuel"] = fuel;
  return p;
}

}  // namespace surv::detail
