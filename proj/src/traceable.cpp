#include <algorithm>
#include <deque>
#include <set>

#include "engine_util.hpp"
#include "surv/engines.hpp"

namespace surv {

std::vector<std::size_t> schedule_prefix(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t block = 1; out.size() < n; ++block)
    for (std::size_t i = 1; i <= block && out.size() < n; ++i) out.push_back(i);
  return out;
}

std::pair<std::size_t, std::size_t> schedule_pair(std::size_t r, const AdversaryFamily& family) {
  if (r == 0) throw std::invalid_argument("schedule labels start at 1");
  std::vector<std::pair<std::size_t, std::size_t>> listed;
  for (const auto& t : family.trees)
    listed.emplace_back(t.id(), std::max<std::size_t>(t.claim() ? t.claim()->k : 3, 3));
  if (r <= listed.size()) return listed[r - 1];
  std::size_t remaining = r - listed.size();
  for (std::size_t c = 0;; ++c) {
    auto p = unpair_code(c);
    if (std::find(listed.begin(), listed.end(), p) == listed.end() && --remaining == 0) return p;
  }
}

LabeledCondition traceable_start(const AdversaryFamily& family, std::size_t depth, std::size_t stages) {
  auto sched = schedule_prefix(depth + 1);
  LevelCode code = [&](std::size_t n) -> std::optional<std::pair<std::size_t, std::size_t>> {
    return schedule_pair(sched[n], family);
  };
  auto built = build_3tree(family, depth, stages, code);
  LabeledCondition c{Word{}, built.tree, {}};
  built.tree.for_each([&](const Word& w, const std::vector<Letter>&) { c.labels[w] = sched[w.size()]; });
  return c;
}

LabeledCondition traceable_full_start(std::size_t depth) {
  auto sched = schedule_prefix(depth + 1);
  LabeledCondition c{Word{}, FiniteTree::full(3, depth), {}};
  c.tree.for_each([&](const Word& w, const std::vector<Letter>&) { c.labels[w] = sched[w.size()]; });
  return c;
}

std::vector<std::string> label_defects(const LabeledCondition& c, bool initial) {
  std::vector<std::string> out;
  const auto& t = c.tree;
  auto label = [&](const Word& w) {
    auto it = c.labels.find(w);
    return it == c.labels.end() ? std::size_t{0} : it->second;
  };
  t.for_each([&](const Word& w, const std::vector<Letter>&) {
    if (!c.labels.count(w)) out.push_back("node " + w.pretty() + " has no label");
  });
  for (const auto& [w, g] : c.labels)
    if (!t.contains(w)) out.push_back("label on non-member " + w.pretty());
  if (!t.contains(c.stem)) {
    out.push_back("stem " + c.stem.pretty() + " is not in the tree");
    return out;
  }
  for (std::size_t n = 0; n < c.stem.size(); ++n)
    if (label(c.stem.prefix(n)) != 0) out.push_back("stem prefix " + c.stem.prefix(n).pretty() + " has nonzero label");

  auto sched = schedule_prefix(2 * t.depth() + 4);
  for (const auto& leaf : detail::maximal_above(t, Word{})) {
    std::vector<std::size_t> seq;
    for (std::size_t n = 0; n <= leaf.size(); ++n)
      if (auto g = label(leaf.prefix(n))) seq.push_back(g);
    auto matches_at = [&](std::size_t j) {
      for (std::size_t i = 0; i < seq.size(); ++i)
        if (j + i >= sched.size() || seq[i] != sched[j + i]) return false;
      return true;
    };
    bool ok = matches_at(0);
    for (std::size_t j = 1; !initial && !ok && j <= t.depth() + 1; ++j) ok = matches_at(j);
    if (!ok)
      out.push_back("labels along " + leaf.pretty() + " are not " +
                    (initial ? "an initial segment" : "a contiguous segment") + " of the schedule");
  }

  auto nodes = t.extensions(c.stem);
  std::map<Word, std::pair<bool, bool>> above;  // (nonzero label above, split above)
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const auto& kids = t.children(*it);
    bool nonzero = label(*it) != 0, split = kids.size() >= 2;
    for (Letter x : kids) {
      const auto& a = above.at(it->child(x));
      nonzero = nonzero || a.first;
      split = split || a.second;
    }
    above[*it] = {nonzero, split};
    if (kids.size() >= 2 && label(*it) == 0) out.push_back("splitting node " + it->pretty() + " has label 0");
    if (!kids.empty() && !nonzero && split)
      out.push_back("node " + it->pretty() + " has no labeled extension but still splits above");
  }
  return out;
}

namespace {

using detail::NodeEvaluator;

class Traceable {
public:
  Traceable(const LabeledCondition& start, const AdversaryFamily& family, std::size_t depth, std::size_t fuel)
      : family_(family), depth_(depth), fuel_(fuel), cond_(start) {}

  void r_stage(StageEntry& e, std::size_t index) {
    const auto& adv = family_.trees[index];
    auto id = adv.id();
    std::size_t r = index + 1, q = fuel_;
    e.requirement = "R" + std::to_string(id);
    const Word& stem = cond_.stem;
    for (std::size_t n = 0; n <= stem.size(); ++n) {
      if (adv.decide(stem.prefix(n), q) == TriState::Out) {
        e.case_taken = "already_out";
        e.certificates.push_back(
            rec_.add_certificate({"avoid", {{"tree", id}, {"node", word_to_json(stem.prefix(n))}, {"stage", q}}}));
        return;
      }
    }
    // Labeled nodes first, as the schedule intends; then any node with an exit.
    std::vector<Word> labeled, others;
    for (const auto& w : cond_.tree.extensions(stem)) {
      if (w.size() >= depth_) continue;
      (cond_.labels.at(w) == r ? labeled : others).push_back(w);
    }
    bool undecided = false;
    std::optional<std::pair<Word, std::vector<Letter>>> blocked;
    for (const auto* list : {&labeled, &others}) {
      for (const auto& tau : *list) {
        std::vector<Letter> in;
        for (Letter c : cond_.tree.children(tau)) {
          auto d = adv.decide(tau.child(c), q);
          if (d == TriState::Out) {
            move_stem(tau.child(c));
            e.case_taken = list == &labeled ? "exit" : "exit_unlabeled";
            e.witnesses = {{"node", word_to_json(tau)}, {"label", r}, {"child", c}};
            e.certificates.push_back(
                rec_.add_certificate({"avoid", {{"tree", id}, {"node", word_to_json(cond_.stem)}, {"stage", q}}}));
            return;
          }
          if (d == TriState::Undecided) undecided = true;
          else in.push_back(c);
        }
        if (list == &labeled && !blocked) blocked = std::make_pair(tau, in);
      }
    }
    if (undecided) throw FuelExhausted(e.index, "adversary " + std::to_string(id) + " undecided above the stem");
    if (!blocked) {
      e.case_taken = "unmet";
      e.certificates.push_back(rec_.add_certificate(
          {"unmet", {{"tree", id}, {"node", word_to_json(stem)}, {"reason", "label_unreachable"}, {"label", r}}}));
      return;
    }
    std::size_t k = adv.claim() ? adv.claim()->k : 3;
    const auto& [tau, in] = *blocked;
    ordered_json data{{"tree", id}, {"node", word_to_json(tau)}, {"stage", q}, {"k", k}, {"children", in}};
    if (in.size() > k) {
      e.case_taken = "not_k_tree";
      e.certificates.push_back(rec_.add_certificate({"not_k_tree", data}));
    } else {
      e.case_taken = "unmet";
      data["reason"] = "blocked";
      e.certificates.push_back(rec_.add_certificate({"unmet", data}));
    }
  }

  void p_stage(StageEntry& e, const OracleFunctional& f) {
    e.requirement = "P" + std::to_string(f.id());
    NodeEvaluator ev(f, fuel_, depth_);
    if (auto esc = detail::totality_escape(cond_.tree, cond_.stem, ev)) {
      move_stem(esc->first);
      e.case_taken = "partial";
      e.certificates.push_back(rec_.add_certificate(
          {"presumed_divergent",
           {{"functional", f.id()}, {"node", word_to_json(cond_.stem)}, {"fuel", fuel_}, {"n", esc->second}}}));
      e.evaluations = ev.evaluations();
      return;
    }
    std::optional<Word> start;
    for (const auto& w : cond_.tree.extensions(cond_.stem)) {
      if (w.size() < depth_ && cond_.labels.at(w) == 1) {
        start = w;
        break;
      }
    }
    if (!start) throw ScheduleUnrepairable("no node labeled 1 above " + cond_.stem.pretty());
    move_stem(*start);
    prune(e, ev);
    e.certificates.push_back(rec_.add_certificate(
        {"trace",
         {{"functional", f.id()}, {"node", word_to_json(cond_.stem)}, {"fuel", fuel_}, {"trace", rec_.traces.size() - 1}}}));
    e.evaluations = ev.evaluations();
  }

  const LabeledCondition& condition() const { return cond_; }
  RunRecord& record() { return rec_; }

private:
  void move_stem(const Word& w) {
    cond_.stem = w;
    cond_.tree = cond_.tree.through(w);
    Labels next;
    cond_.tree.for_each([&](const Word& x, const std::vector<Letter>&) {
      next[x] = x.size() < w.size() ? 0 : cond_.labels.at(x);
    });
    cond_.labels = std::move(next);
  }

  // Keeps one labeled node per open node, in schedule order and with strictly
  // growing convergence, and every child of it; open nodes with no such
  // extension are cut down to their least leaf.
  void prune(StageEntry& e, NodeEvaluator& ev) {
    struct Open {
      Word y;
      std::size_t next;
      std::optional<std::size_t> bound;
    };
    const auto& tree = cond_.tree;
    auto sched = schedule_prefix(depth_ + 2);
    std::deque<Open> queue{{cond_.stem, 0, std::nullopt}};
    std::map<Word, std::size_t> chosen;
    std::vector<Word> leaves;
    std::size_t splits = 0, truncated = 0;
    while (!queue.empty()) {
      auto [y, next, bound] = queue.front();
      queue.pop_front();
      std::optional<Word> pick;
      for (const auto& w : tree.extensions(y)) {
        if (w.size() >= depth_ || cond_.labels.at(w) != sched[next]) continue;
        std::size_t c = ev.at(w).conv;
        if (!bound || c > *bound || c >= depth_) {
          pick = w;
          break;
        }
      }
      if (!pick) {
        leaves.push_back(tree.least_leaf_above(y));
        ++truncated;
        continue;
      }
      chosen[*pick] = sched[next];
      const auto& kids = tree.children(*pick);
      if (kids.size() >= 2) ++splits;
      for (Letter c : kids) queue.push_back({pick->child(c), next + 1, ev.at(*pick).conv});
    }
    std::sort(leaves.begin(), leaves.end(), ShortLex{});
    cond_.tree = detail::closure_like(tree, leaves);
    Labels next;
    cond_.tree.for_each([&](const Word& x, const std::vector<Letter>&) {
      auto it = chosen.find(x);
      next[x] = it == chosen.end() ? 0 : it->second;
    });
    cond_.labels = std::move(next);

    std::size_t len = depth_;
    for (const auto& l : leaves) len = std::min(len, ev.at(l).conv);
    std::vector<Word> words;
    for (const auto& l : leaves)
      for (std::size_t n = 0; n <= len; ++n) words.push_back(ev.at(l).out.prefix(n));
    rec_.traces.push_back(TraceTable::from_words(words, len, LevelBound::pow(3)));
    e.case_taken = "prune";
    e.witnesses = {{"splits", splits}, {"truncated", truncated}, {"trace_depth", len}};
  }

  const AdversaryFamily& family_;
  std::size_t depth_, fuel_;
  LabeledCondition cond_;
  RunRecord rec_;
};

}  // namespace

RunRecord traceable_prune(const LabeledCondition& start, const AdversaryFamily& family, std::size_t stages,
                          std::size_t depth, std::size_t fuel) {
  if (start.tree.depth() != depth) throw std::invalid_argument("start tree depth differs from the working depth");
  if (depth > 63) throw std::invalid_argument("depth must be below 64");
  std::size_t limit = 2 * std::max(family.trees.size(), family.functionals.size());
  if (stages > limit)
    throw std::invalid_argument("stages (" + std::to_string(stages) + ") exceed twice the adversary count (" +
                                std::to_string(limit) + ")");
  if (auto defects = label_defects(start, true); !defects.empty())
    throw std::invalid_argument("start condition: " + defects.front());
  Traceable run(start, family, depth, fuel);
  auto& rec = run.record();
  rec.engine = "traceable";
  rec.parameters = detail::stage_params(stages, depth, fuel);
  rec.parameters["schedule"] = schedule_prefix(2 * depth + 4);
  rec.family = family_to_json(family);
  for (std::size_t s = 0; s < stages; ++s) {
    StageEntry e;
    e.index = s;
    std::size_t i = s / 2;
    try {
      if (s % 2 == 0) {
        if (i < family.trees.size()) run.r_stage(e, i);
        else e.requirement = "R-", e.case_taken = "absent";
      } else {
        if (i < family.functionals.size()) run.p_stage(e, family.functionals[i]);
        else e.requirement = "P-", e.case_taken = "absent";
      }
    } catch (const std::runtime_error& ex) {
      if (!dynamic_cast<const FuelExhausted*>(&ex) && !dynamic_cast<const ScheduleUnrepairable*>(&ex) &&
          !dynamic_cast<const BoundExceeded*>(&ex))
        throw;
      e.case_taken = "stopped";
      rec.stages.push_back(e);
      rec.complete = false;
      rec.error = ex.what();
      break;
    }
    e.witnesses["label_defects"] = label_defects(run.condition(), s % 2 == 1 && e.case_taken == "prune").size();
    rec.stages.push_back(std::move(e));
  }
  rec.final_stem = run.condition().stem;
  rec.final_tree = run.condition().tree;
  rec.labels = run.condition().labels;
  return std::move(rec);
}

}  // namespace surv
