#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "engine_util.hpp"
#include "surv/engines.hpp"

namespace surv {

FiniteTree accelerating_skeleton(const Word& root, std::size_t depth) {
  std::vector<Word> leaves;
  std::function<void(const Word&, std::size_t)> grow = [&](const Word& w, std::size_t splits) {
    if (w.size() >= depth) {
      leaves.push_back(w);
    } else if (splits >= 3) {
      leaves.push_back(w.concat(zeros(depth - w.size())));
    } else {
      for (Letter c = 0; c < splits + 3; ++c) grow(w.child(c), splits + 1);
    }
  };
  grow(root, 0);
  return FiniteTree::closure_of(leaves, std::nullopt, std::max(depth, root.size()));
}

namespace {

using detail::NodeEvaluator;

std::size_t pow3(std::size_t n) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < n; ++i) r = r > SIZE_MAX / 3 ? SIZE_MAX : r * 3;
  return r;
}

// A P-stage finds an output of at least 3 while in Case 4.
struct SwitchToLarge {
  Word node;
  std::size_t n;
};

class Accelerating {
public:
  Accelerating(const AdversaryFamily& family, std::size_t depth, std::size_t fuel)
      : family_(family), depth_(depth), fuel_(fuel) {}

  void r_stage(StageEntry& e, const StagedTree& adv) {
    e.requirement = "R" + std::to_string(adv.id());
    std::size_t k = adv.claim() ? adv.claim()->k : 2;
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
    auto x = find_first(
        stem_, [&](const Word& y) { return children(y); },
        [&](const Word& y) { return children(y).size() >= k + 1; }, SIZE_MAX);
    if (!x) {
      e.case_taken = "unmet";
      e.certificates.push_back(rec_.add_certificate(
          {"unmet", {{"tree", id}, {"node", word_to_json(stem_)}, {"reason", "no_wide_node"}, {"k", k}}}));
      return;
    }
    bool undecided = false;
    std::vector<Letter> in;
    for (Letter c : children(*x)) {
      auto d = adv.decide(x->child(c), q);
      if (d == TriState::Out) {
        move_stem(x->child(c));
        e.case_taken = "exit";
        e.witnesses = {{"split", word_to_json(*x)}, {"child", c}};
        e.certificates.push_back(
            rec_.add_certificate({"avoid", {{"tree", id}, {"node", word_to_json(stem_)}, {"stage", q}}}));
        return;
      }
      if (d == TriState::Undecided) undecided = true;
      else in.push_back(c);
    }
    if (undecided) throw FuelExhausted(e.index, "adversary " + std::to_string(id) + " undecided above " + x->pretty());
    e.case_taken = "not_k_tree";
    e.certificates.push_back(rec_.add_certificate(
        {"not_k_tree", {{"tree", id}, {"node", word_to_json(*x)}, {"stage", q}, {"k", k}, {"children", in}}}));
  }

  void p_stage(StageEntry& e, const OracleFunctional& f) {
    e.requirement = "P" + std::to_string(f.id());
    NodeEvaluator ev(f, fuel_, depth_);
    auto base = [&](const Word& node) {
      return ordered_json{{"functional", f.id()}, {"node", word_to_json(node)}, {"fuel", fuel_}};
    };
    auto probe_data = [&](ordered_json d) {
      if (implicit_) {
        d["probe"] = "skeleton";
        d["probe_root"] = word_to_json(stem_);
      } else {
        d["probe"] = "tree";
      }
      return d;
    };
    FiniteTree probe = implicit_ ? accelerating_skeleton(stem_, depth_) : tree_;

    if (auto esc = detail::totality_escape(probe, stem_, ev)) {
      auto data = probe_data(base(esc->first));
      data["n"] = esc->second;
      move_stem(esc->first);
      e.case_taken = "partial";
      e.certificates.push_back(rec_.add_certificate({"presumed_divergent", data}));
    } else if (auto big = large_output(ev)) {
      take_large(e, f, *big);
    } else if (auto c = constant_node(probe, ev)) {
      auto data = probe_data(base(*c));
      move_stem(*c);
      e.case_taken = "constant";
      e.certificates.push_back(rec_.add_certificate({"constant", data}));
    } else {
      try {
        majority(e, ev);
        auto data = base(stem_);
        data["trace"] = rec_.traces.size() - 1;
        e.certificates.push_back(rec_.add_certificate({"trace", data}));
      } catch (const SwitchToLarge& s) {
        e.witnesses = ordered_json::object();
        take_large(e, f, s);
      }
    }
    e.evaluations = ev.evaluations();
  }

  RunRecord finish() {
    if (implicit_) {
      rec_.final_tree = accelerating_skeleton(stem_, depth_);
      rec_.parameters["materialized"] = true;
    } else {
      rec_.final_tree = tree_;
    }
    rec_.final_stem = stem_;
    return std::move(rec_);
  }

  RunRecord& record() { return rec_; }

private:
  std::vector<Letter> children(const Word& w) const {
    if (!implicit_) return tree_.children(w);
    if (w.size() >= depth_) return {};
    if (w.size() < stem_.size()) return {stem_[w.size()]};
    std::vector<Letter> all(kAcceleratingWidth);
    std::iota(all.begin(), all.end(), Letter{0});
    return all;
  }

  std::vector<Letter> probe_children(const Word& w) const {
    auto c = children(w);
    if (implicit_ && c.size() > kProbeWidth) c.resize(kProbeWidth);
    return c;
  }

  // First node above `root` in shortlex order satisfying `pred`, among at most
  // `budget` visited nodes.
  template <class Kids, class Pred>
  static std::optional<Word> find_first(const Word& root, Kids kids, Pred pred, std::size_t budget) {
    std::deque<Word> queue{root};
    std::size_t seen = 1;
    while (!queue.empty()) {
      Word w = std::move(queue.front());
      queue.pop_front();
      if (pred(w)) return w;
      for (Letter c : kids(w)) {
        if (seen >= budget) break;
        queue.push_back(w.child(c));
        ++seen;
      }
    }
    return std::nullopt;
  }

  // Least probe extension of `c` converging past m, optionally with value != avoid at m.
  std::optional<Word> probe_extension(const Word& c, std::size_t m, std::optional<Letter> avoid, NodeEvaluator& ev) {
    std::deque<Word> queue{c};
    while (!queue.empty()) {
      Word w = std::move(queue.front());
      queue.pop_front();
      const auto& info = ev.at(w);
      if (info.conv > m && (!avoid || info.out[m] != *avoid)) return w;
      for (Letter x : probe_children(w)) queue.push_back(w.child(x));
    }
    return std::nullopt;
  }

  void move_stem(const Word& w) {
    stem_ = w;
    if (!implicit_) tree_ = tree_.through(w);
  }

  std::optional<SwitchToLarge> large_output(NodeEvaluator& ev) {
    std::size_t hit = 0;
    auto large = [&](const Word& w) {
      const auto& info = ev.at(w);
      for (std::size_t n = 0; n < info.values.size(); ++n) {
        if (info.values[n] && *info.values[n] >= 3) {
          hit = n;
          return true;
        }
      }
      return false;
    };
    auto w = find_first(stem_, [&](const Word& y) { return children(y); }, large, kSearchBudget);
    if (!w) return std::nullopt;
    return SwitchToLarge{*w, hit};
  }

  void take_large(StageEntry& e, const OracleFunctional& f, const SwitchToLarge& s) {
    move_stem(s.node);
    e.case_taken = "large_output";
    e.certificates.push_back(rec_.add_certificate(
        {"output_ge3", {{"functional", f.id()}, {"node", word_to_json(s.node)}, {"fuel", fuel_}, {"n", s.n}}}));
  }

  // Least probe node above the stem with two or more leaves, all of whose
  // converged values agree position by position.
  std::optional<Word> constant_node(const FiniteTree& probe, NodeEvaluator& ev) {
    for (const auto& w : probe.extensions(stem_)) {
      auto leaves = detail::maximal_above(probe, w);
      if (leaves.size() < 2) continue;
      bool agree = true;
      for (std::size_t n = 0; n < depth_ && agree; ++n) {
        std::optional<Letter> seen;
        for (const auto& l : leaves) {
          const auto& v = ev.at(l).values[n];
          if (!v) continue;
          if (seen && *seen != *v) agree = false;
          seen = v;
        }
      }
      if (agree) return w;
    }
    return std::nullopt;
  }

  struct Round {
    std::size_t m;
    std::vector<Word> nodes;
  };

  // Least m >= from at which extensions of the candidates disagree.
  std::optional<Round> disagreement(const std::vector<Word>& cands, std::size_t from, NodeEvaluator& ev) {
    for (std::size_t m = from; m < depth_; ++m) {
      Round r{m, {}};
      for (const auto& c : cands) {
        auto d = probe_extension(c, m, std::nullopt, ev);
        if (!d) return std::nullopt;
        r.nodes.push_back(*d);
      }
      Letter v = ev.at(r.nodes[0]).out[m];
      bool split = false;
      for (const auto& d : r.nodes) split = split || ev.at(d).out[m] != v;
      for (std::size_t i = 0; i < cands.size() && !split; ++i) {
        if (auto d = probe_extension(cands[i], m, v, ev)) {
          r.nodes[i] = *d;
          split = true;
        }
      }
      if (split) return r;
    }
    return std::nullopt;
  }

  Word least_path(Word w) const {
    while (true) {
      auto c = children(w);
      if (c.empty()) return w;
      w = w.child(c.front());
    }
  }

  void majority(StageEntry& e, NodeEvaluator& ev) {
    struct Level {
      Word node;
      std::size_t splits, agreed;
    };
    std::deque<Level> queue{{stem_, 0, 0}};
    std::vector<Word> leaves;
    std::size_t splits = 0, truncated = 0;
    while (!queue.empty()) {
      auto [tau, j, agreed] = queue.front();
      queue.pop_front();
      if (tau.size() >= depth_) {
        leaves.push_back(tau);
        continue;
      }
      std::size_t need = pow3(j + 2);
      if (implicit_ && need > kAcceleratingWidth) {
        ++truncated;
        leaves.push_back(least_path(tau));
        continue;
      }
      auto sigma = find_first(
          tau, [&](const Word& y) { return children(y); },
          [&](const Word& y) { return children(y).size() >= need; }, implicit_ ? 1 : SIZE_MAX);
      if (!sigma)
        throw CandidateShortage("fewer than " + std::to_string(need) + " successors above " + tau.pretty());
      std::vector<Word> cands;
      for (Letter c : children(*sigma)) {
        if (cands.size() == need) break;
        cands.push_back(sigma->child(c));
      }
      std::size_t rounds = j + 2, from = agreed;
      std::vector<std::pair<Word, std::size_t>> kept;
      bool ok = true;
      for (std::size_t r = 0; r < rounds; ++r) {
        auto round = disagreement(cands, from, ev);
        if (!round) {
          ok = false;
          break;
        }
        std::size_t m = round->m;
        std::map<Letter, std::size_t> count;
        for (const auto& d : round->nodes) {
          Letter v = ev.at(d).out[m];
          if (v >= 3) throw SwitchToLarge{d, m};
          ++count[v];
        }
        Letter maj = count.begin()->first;
        for (const auto& [v, c] : count)
          if (c > count[maj]) maj = v;
        std::vector<Word> next;
        bool dissent = false;
        for (const auto& d : round->nodes) {
          if (ev.at(d).out[m] == maj) {
            if (next.size() < pow3(rounds - 1 - r)) next.push_back(d);
          } else if (!dissent) {
            kept.emplace_back(d, m + 1);
            dissent = true;
          }
        }
        cands = std::move(next);
        from = m + 1;
      }
      if (!ok) {
        ++truncated;
        leaves.push_back(least_path(tau));
        continue;
      }
      ++splits;
      kept.emplace_back(cands.front(), from);
      for (const auto& [w, a] : kept) queue.push_back({w, j + 1, a});
    }
    std::sort(leaves.begin(), leaves.end(), ShortLex{});
    std::size_t len = depth_;
    for (const auto& l : leaves) {
      const auto& info = ev.at(l);
      len = std::min(len, info.conv);
      for (std::size_t n = 0; n < info.conv; ++n)
        if (info.out[n] >= 3) throw SwitchToLarge{l, n};
    }
    std::vector<Word> outs;
    for (const auto& l : leaves) outs.push_back(ev.at(l).out.prefix(len));
    implicit_ = false;
    tree_ = FiniteTree::closure_of(leaves, std::nullopt, depth_);
    rec_.traces.push_back(detail::trace_of_outputs(outs, len, LevelBound::pow(2)));
    e.case_taken = "majority";
    e.witnesses = {{"splits", splits}, {"truncated", truncated}, {"branches", leaves.size()}, {"trace_depth", len}};
  }

  const AdversaryFamily& family_;
  std::size_t depth_, fuel_;
  bool implicit_ = true;
  FiniteTree tree_;
  Word stem_;
  RunRecord rec_;
};

}  // namespace

RunRecord accelerating_force(const AdversaryFamily& family, std::size_t stages, std::size_t depth, std::size_t fuel) {
  if (depth > 63) throw std::invalid_argument("depth must be below 64");
  std::size_t limit = 2 * std::max(family.trees.size(), family.functionals.size());
  if (stages > limit)
    throw std::invalid_argument("stages (" + std::to_string(stages) + ") exceed twice the adversary count (" +
                                std::to_string(limit) + ")");
  Accelerating run(family, depth, fuel);
  auto& rec = run.record();
  rec.engine = "accelerating";
  rec.parameters = detail::stage_params(stages, depth, fuel);
  rec.parameters["width"] = kAcceleratingWidth;
  rec.parameters["probe_width"] = kProbeWidth;
  rec.parameters["search_budget"] = kSearchBudget;
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
    } catch (const CandidateShortage& ex) {
      e.case_taken = "candidate_shortage";
      rec.stages.push_back(e);
      rec.complete = false;
      rec.error = std::string("CandidateShortage: ") + ex.what();
      break;
    }
    rec.stages.push_back(std::move(e));
  }
  return run.finish();
}

}  // namespace surv
