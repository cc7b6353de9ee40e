#include <algorithm>
#include <deque>
#include <set>

#include "engine_util.hpp"
#include "surv/engines.hpp"

namespace surv {

namespace {

using detail::NodeEvaluator;

struct Pick {
  std::size_t n = 0;
  std::vector<Word> nodes;
};

// k+1 extensions, one above each child of `x`, with pairwise distinct outputs of
// a common length n >= n0. Least n first, then least representatives.
std::optional<Pick> distinct_extensions(const FiniteTree& tree, const Word& x, std::size_t n0, NodeEvaluator& ev) {
  const auto& kids = tree.children(x);
  for (std::size_t n = std::max<std::size_t>(n0, 1); n <= ev.cap(); ++n) {
    std::vector<std::vector<std::pair<Word, Word>>> cands(kids.size());
    bool empty = false;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      std::set<Word> seen;
      for (const auto& y : tree.extensions(x.child(kids[i]))) {
        const auto& info = ev.at(y);
        if (info.conv < n) continue;
        Word o = info.out.prefix(n);
        if (seen.insert(o).second) cands[i].emplace_back(y, o);
      }
      if (cands[i].empty()) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> choice(kids.size());
    std::set<Word> used;
    std::function<bool(std::size_t)> assign = [&](std::size_t i) {
      if (i == kids.size()) return true;
      for (std::size_t j = 0; j < cands[i].size(); ++j) {
        if (used.count(cands[i][j].second)) continue;
        used.insert(cands[i][j].second);
        choice[i] = j;
        if (assign(i + 1)) return true;
        used.erase(cands[i][j].second);
      }
      return false;
    };
    if (assign(0)) {
      Pick p{n, {}};
      for (std::size_t i = 0; i < kids.size(); ++i) p.nodes.push_back(cands[i][choice[i]].first);
      return p;
    }
  }
  return std::nullopt;
}

class Surviving {
public:
  Surviving(std::size_t k, const AdversaryFamily& family, std::size_t depth, std::size_t fuel)
      : k_(k), family_(family), depth_(depth), fuel_(fuel), tree_(FiniteTree::full(static_cast<Letter>(k + 1), depth)) {}

  void r_stage(StageEntry& e, const StagedTree& adv) {
    e.requirement = "R" + std::to_string(adv.id());
    std::size_t q = fuel_;
    auto id = adv.id();
    for (std::size_t n = 0; n <= stem_.size(); ++n) {
      if (adv.decide(stem_.prefix(n), q) == TriState::Out) {
        e.case_taken = "already_out";
        e.certificates.push_back(rec_.add_certificate(
            {"avoid", {{"tree", id}, {"node", word_to_json(stem_.prefix(n))}, {"stage", q}}}));
        return;
      }
    }
    auto x = detail::first_split_above(tree_, stem_);
    if (!x) {
      e.case_taken = "unmet";
      e.certificates.push_back(rec_.add_certificate(
          {"unmet", {{"tree", id}, {"node", word_to_json(stem_)}, {"reason", "no_split"}}}));
      return;
    }
    bool undecided = false;
    std::vector<Letter> in;
    for (Letter c : tree_.children(*x)) {
      auto d = adv.decide(x->child(c), q);
      if (d == TriState::Out) {
        stem_ = x->child(c);
        tree_ = tree_.through(stem_);
        e.case_taken = "exit";
        e.witnesses = {{"split", word_to_json(*x)}, {"child", c}};
        e.certificates.push_back(
            rec_.add_certificate({"avoid", {{"tree", id}, {"node", word_to_json(stem_)}, {"stage", q}}}));
        return;
      }
      if (d == TriState::Undecided) undecided = true;
      else in.push_back(c);
    }
    if (undecided)
      throw FuelExhausted(e.index, "adversary " + std::to_string(id) + " undecided above " + x->pretty());
    e.case_taken = "not_k_tree";
    e.certificates.push_back(rec_.add_certificate(
        {"not_k_tree", {{"tree", id}, {"node", word_to_json(*x)}, {"stage", q}, {"k", k_}, {"children", in}}}));
  }

  void p_stage(StageEntry& e, const OracleFunctional& f) {
    e.requirement = "P" + std::to_string(f.id());
    NodeEvaluator ev(f, fuel_, depth_);
    auto cert_base = [&](const Word& node) {
      return ordered_json{{"functional", f.id()}, {"node", word_to_json(node)}, {"fuel", fuel_}};
    };
    if (auto esc = detail::totality_escape(tree_, stem_, ev)) {
      stem_ = esc->first;
      tree_ = tree_.through(stem_);
      e.case_taken = "partial";
      auto data = cert_base(stem_);
      data["n"] = esc->second;
      e.certificates.push_back(rec_.add_certificate({"presumed_divergent", data}));
    } else if (auto few = few_values(ev)) {
      stem_ = few->first;
      tree_ = tree_.through(stem_);
      e.case_taken = "few_values";
      rec_.traces.push_back(detail::trace_of_outputs(few->second, few_length_, LevelBound::constant(k_)));
      auto data = cert_base(stem_);
      data["trace"] = rec_.traces.size() - 1;
      e.witnesses = {{"values", few->second.size()}};
      e.certificates.push_back(rec_.add_certificate({"trace", data}));
    } else {
      splitting(e, ev);
      auto data = cert_base(stem_);
      data["trace"] = rec_.traces.size() - 1;
      e.certificates.push_back(rec_.add_certificate({"trace", data}));
    }
    e.evaluations = ev.evaluations();
  }

  RunRecord finish() {
    rec_.final_stem = stem_;
    rec_.final_tree = tree_;
    return std::move(rec_);
  }

  RunRecord& record() { return rec_; }

private:
  // Least node above the stem with k+1 leaves whose fully converged outputs take
  // at most k values.
  std::optional<std::pair<Word, std::vector<Word>>> few_values(NodeEvaluator& ev) {
    for (const auto& tau : tree_.extensions(stem_)) {
      auto leaves = detail::maximal_above(tree_, tau);
      if (leaves.size() < k_ + 1) continue;
      std::size_t len = depth_;
      for (const auto& l : leaves) len = std::min(len, ev.at(l).conv);
      std::set<Word> outs;
      for (const auto& l : leaves) outs.insert(ev.at(l).out.prefix(len));
      if (outs.size() <= k_) {
        few_length_ = len;
        return std::make_pair(tau, std::vector<Word>(outs.begin(), outs.end()));
      }
    }
    return std::nullopt;
  }

  void splitting(StageEntry& e, NodeEvaluator& ev) {
    struct Pending {
      Word t;
      std::size_t ulen, sdepth;
    };
    std::deque<Pending> queue{{stem_, 0, 0}};
    std::vector<Word> terminals;
    std::size_t splits = 0, stuck = 0;
    while (!queue.empty()) {
      auto [t, ulen, sdepth] = queue.front();
      queue.pop_front();
      auto x = detail::first_split_above(tree_, t);
      std::optional<Pick> pick;
      if (x) pick = distinct_extensions(tree_, *x, std::max(sdepth + 1, ulen), ev);
      if (!pick) {
        if (x) ++stuck;
        terminals.push_back(tree_.least_leaf_above(t));
        continue;
      }
      ++splits;
      for (auto& y : pick->nodes) queue.push_back({y, pick->n, sdepth + 1});
    }
    std::sort(terminals.begin(), terminals.end(), ShortLex{});
    tree_ = detail::closure_like(tree_, terminals);
    std::size_t len = depth_;
    for (const auto& l : terminals) len = std::min(len, ev.at(l).conv);
    std::vector<Word> outs;
    for (const auto& l : terminals) outs.push_back(ev.at(l).out.prefix(len));
    rec_.traces.push_back(detail::trace_of_outputs(outs, len, LevelBound::pow(k_ + 1)));
    e.case_taken = "splitting";
    e.witnesses = {{"splits", splits}, {"stuck", stuck}, {"branches", terminals.size()}, {"trace_depth", len}};
  }

  std::size_t k_;
  const AdversaryFamily& family_;
  std::size_t depth_, fuel_;
  FiniteTree tree_;
  Word stem_;
  RunRecord rec_;
  std::size_t few_length_ = 0;
};

}  // namespace

RunRecord diagonalize_surviving(std::size_t k, const AdversaryFamily& family, std::size_t stages, std::size_t depth,
                                std::size_t fuel) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (depth > 63) throw std::invalid_argument("depth must be below 64");
  double nodes = 1;
  for (std::size_t i = 0; i < depth; ++i) nodes *= static_cast<double>(k + 1);
  if (nodes > 2e6) throw std::invalid_argument("(k+1)^depth exceeds the explicit-tree budget");
  std::size_t limit = 2 * std::max(family.trees.size(), family.functionals.size());
  if (stages > limit)
    throw std::invalid_argument("stages (" + std::to_string(stages) + ") exceed twice the adversary count (" +
                                std::to_string(limit) + ")");
  Surviving run(k, family, depth, fuel);
  auto& rec = run.record();
  rec.engine = "surviving";
  rec.parameters = detail::stage_params(stages, depth, fuel);
  rec.parameters["k"] = k;
  rec.family = family_to_json(family);
  for (std::size_t s = 0; s < stages; ++s) {
    StageEntry e;
    e.index = s;
    std::size_t i = s / 2;
    try {
      if (s % 2 == 0) {
        if (i < family.trees.size()) run.r_stage(e, family.trees[i]);
        else e.requirement = "R-", e.case_taken = "absent";
      } else {
        if (i < family.functionals.size()) run.p_stage(e, family.functionals[i]);
        else e.requirement = "P-", e.case_taken = "absent";
      }
    } catch (const FuelExhausted& ex) {
      e.case_taken = "fuel_exhausted";
      rec.stages.push_back(e);
      rec.complete = false;
      rec.error = ex.what();
      break;
    }
    rec.stages.push_back(std::move(e));
  }
  return run.finish();
}

}  // namespace surv
