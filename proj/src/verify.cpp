#include "surv/verify.hpp"

#include <set>

#include "engine_util.hpp"
#include "surv/engines.hpp"

namespace surv {

namespace {

const std::set<std::string> kStopCases{"fuel_exhausted", "candidate_shortage", "stopped"};

struct Checker {
  const RunRecord& rec;
  const AdversaryFamily& fam;
  VerifyReport& rep;
  std::size_t depth, fuel;
  std::vector<std::optional<std::size_t>> cert_stage;

  void defect(const std::string& msg) { rep.defects.push_back(msg); }

  bool on_stem(const Word& node) const { return node.is_prefix_of(rec.final_stem); }

  FiniteTree probe_for(const ordered_json& d) const {
    if (d.contains("probe") && d.at("probe") == "skeleton")
      return accelerating_skeleton(word_from_json(d.at("probe_root")), depth);
    return rec.final_tree;
  }

  const OracleFunctional& functional(const ordered_json& d) const {
    const auto* f = fam.functional_by_id(d.at("functional").get<std::size_t>());
    if (!f) throw std::invalid_argument("unknown functional " + d.at("functional").dump());
    return *f;
  }

  const StagedTree& adversary(const ordered_json& d) const {
    const auto* t = fam.tree_by_id(d.at("tree").get<std::size_t>());
    if (!t) throw std::invalid_argument("unknown tree " + d.at("tree").dump());
    return *t;
  }

  // Expected level bound of trace certificates issued at stage s.
  std::optional<LevelBound> expected_bound(std::size_t s) const {
    if (rec.engine == "surviving") {
      std::size_t k = rec.parameters.at("k").get<std::size_t>();
      return rec.stages.at(s).case_taken == "few_values" ? LevelBound::constant(k) : LevelBound::pow(k + 1);
    }
    if (rec.engine == "traceable") return LevelBound::pow(3);
    if (rec.engine == "accelerating") return LevelBound::pow(2);
    return std::nullopt;
  }

  void check(std::size_t idx) {
    const auto& c = rec.certificates[idx];
    const auto& d = c.data;
    std::string at = "certificate " + std::to_string(idx) + " (" + c.kind + "): ";
    ++rep.certificates_checked;
    if (c.kind == "avoid") {
      Word node = word_from_json(d.at("node"));
      if (adversary(d).decide(node, d.at("stage").get<std::size_t>()) != TriState::Out)
        defect(at + "node " + node.pretty() + " is not Out");
      if (!on_stem(node)) defect(at + "node " + node.pretty() + " is not a prefix of the final stem");
    } else if (c.kind == "not_k_tree") {
      Word node = word_from_json(d.at("node"));
      auto kids = d.at("children").get<std::vector<Letter>>();
      std::set<Letter> distinct(kids.begin(), kids.end());
      std::size_t k = d.at("k").get<std::size_t>();
      if (distinct.size() != kids.size()) defect(at + "repeated children");
      if (kids.size() <= k) defect(at + std::to_string(kids.size()) + " children do not exceed k=" + std::to_string(k));
      std::size_t stage = d.at("stage").get<std::size_t>();
      for (Letter x : kids)
        if (adversary(d).decide(node.child(x), stage) != TriState::In)
          defect(at + "child " + node.child(x).pretty() + " is not In");
    } else if (c.kind == "presumed_divergent") {
      Word node = word_from_json(d.at("node"));
      const auto& f = functional(d);
      auto probe = probe_for(d);
      std::size_t n = d.at("n").get<std::size_t>(), q = d.at("fuel").get<std::size_t>();
      if (!probe.contains(node)) defect(at + "node " + node.pretty() + " is not in the probe");
      else
        for (const auto& l : probe.leaves_above(node))
          if (f.eval(l, n, q)) {
            defect(at + "leaf " + l.pretty() + " converges at " + std::to_string(n));
            break;
          }
      if (!on_stem(node)) defect(at + "node " + node.pretty() + " is not a prefix of the final stem");
    } else if (c.kind == "trace") {
      check_trace(idx, at);
    } else if (c.kind == "output_ge3") {
      Word node = word_from_json(d.at("node"));
      auto v = functional(d).eval(node, d.at("n").get<std::size_t>(), d.at("fuel").get<std::size_t>());
      if (!v || *v < 3) defect(at + "no output of at least 3 on " + node.pretty());
      if (!on_stem(node)) defect(at + "node " + node.pretty() + " is not a prefix of the final stem");
    } else if (c.kind == "constant") {
      Word node = word_from_json(d.at("node"));
      const auto& f = functional(d);
      auto probe = probe_for(d);
      std::size_t q = d.at("fuel").get<std::size_t>();
      if (!probe.contains(node)) {
        defect(at + "node " + node.pretty() + " is not in the probe");
      } else {
        auto leaves = probe.leaves_above(node);
        if (leaves.size() < 2) defect(at + "fewer than two probe leaves above " + node.pretty());
        for (std::size_t n = 0; n < depth; ++n) {
          std::optional<Letter> seen;
          bool split = false;
          for (const auto& l : leaves) {
            auto v = f.eval(l, n, q);
            if (v && seen && *v != *seen) split = true;
            if (v) seen = v;
          }
          if (split) {
            defect(at + "outputs disagree at " + std::to_string(n));
            break;
          }
        }
      }
      if (!on_stem(node)) defect(at + "node " + node.pretty() + " is not a prefix of the final stem");
    } else if (c.kind == "unmet") {
      Word node = word_from_json(d.at("node"));
      adversary(d);
      auto reason = d.at("reason").get<std::string>();
      if (reason == "no_split") {
        if (rec.final_tree.contains(node) && detail::first_split_above(rec.final_tree, node))
          defect(at + "the final tree splits above " + node.pretty());
      } else if (reason == "no_wide_node") {
        std::size_t k = d.at("k").get<std::size_t>();
        if (rec.final_tree.contains(node))
          for (const auto& w : rec.final_tree.extensions(node))
            if (rec.final_tree.child_count(w) > k) {
              defect(at + "node " + w.pretty() + " has more than k children");
              break;
            }
      } else if (reason == "blocked") {
        std::size_t stage = d.at("stage").get<std::size_t>();
        for (Letter x : d.at("children").get<std::vector<Letter>>())
          if (adversary(d).decide(node.child(x), stage) != TriState::In)
            defect(at + "child " + node.child(x).pretty() + " is not In");
      } else if (reason != "label_unreachable") {
        defect(at + "unknown reason " + reason);
      }
    } else {
      defect(at + "unknown kind");
    }
  }

  void check_trace(std::size_t idx, const std::string& at) {
    const auto& d = rec.certificates[idx].data;
    std::size_t t = d.at("trace").get<std::size_t>();
    if (t >= rec.traces.size()) {
      defect(at + "trace index out of range");
      return;
    }
    const auto& tr = rec.traces[t];
    if (cert_stage[idx]) {
      auto want = expected_bound(*cert_stage[idx]);
      if (!want || !(tr.bound() == *want))
        defect(at + "trace bound " + tr.bound().to_string() + " differs from the engine's");
    }
    for (std::size_t n = 0; n <= tr.depth(); ++n)
      if (tr.level(n).size() > tr.bound().at(n)) defect(at + "level " + std::to_string(n) + " exceeds its bound");
    if (rec.engine == "accelerating")
      if (auto v = is_k_tree_to_depth(tr.as_tree(), 2, tr.depth())) defect(at + "trace is not a 2-tree: " + v->describe());
    Word node = word_from_json(d.at("node"));
    if (!on_stem(node)) defect(at + "node " + node.pretty() + " is not a prefix of the final stem");
    if (!rec.final_tree.contains(node)) return;
    const auto& f = functional(d);
    std::size_t q = d.at("fuel").get<std::size_t>();
    for (const auto& l : rec.final_tree.leaves_above(node)) {
      ++rep.branches_checked;
      Word out = converged_output(f, l, q, depth);
      if (out.size() < tr.depth()) {
        defect(at + "branch " + l.pretty() + " converges only to " + std::to_string(out.size()));
        return;
      }
      if (!goes_through(out.prefix(tr.depth()), tr)) {
        defect(at + "branch " + l.pretty() + " does not go through the trace");
        return;
      }
    }
  }

  void stages() {
    std::size_t want = rec.parameters.at("stages").get<std::size_t>();
    for (std::size_t s = 0; s < rec.stages.size(); ++s) {
      const auto& e = rec.stages[s];
      if (e.index != s) defect("stage " + std::to_string(s) + ": index " + std::to_string(e.index));
      for (auto c : e.certificates) {
        if (c >= rec.certificates.size()) {
          defect("stage " + std::to_string(s) + ": certificate " + std::to_string(c) + " out of range");
        } else if (cert_stage[c]) {
          defect("certificate " + std::to_string(c) + " claimed by two stages");
        } else {
          cert_stage[c] = s;
        }
      }
      if (rec.engine == "build3") continue;
      std::size_t i = s / 2;
      bool even = s % 2 == 0;
      std::size_t have = even ? fam.trees.size() : fam.functionals.size();
      std::string req = i < have ? (even ? "R" + std::to_string(fam.trees[i].id())
                                         : "P" + std::to_string(fam.functionals[i].id()))
                                 : (even ? "R-" : "P-");
      if (e.requirement != req) defect("stage " + std::to_string(s) + ": requirement " + e.requirement + ", expected " + req);
      for (auto c : e.certificates) {
        if (c >= rec.certificates.size()) continue;
        const auto& d = rec.certificates[c].data;
        const char* key = even ? "tree" : "functional";
        if (!d.contains(key) || i >= have ||
            d.at(key).get<std::size_t>() != (even ? fam.trees[i].id() : fam.functionals[i].id()))
          defect("certificate " + std::to_string(c) + " does not belong to stage " + std::to_string(s));
      }
    }
    if (rec.engine != "build3")
      for (std::size_t c = 0; c < cert_stage.size(); ++c)
        if (!cert_stage[c]) defect("certificate " + std::to_string(c) + " belongs to no stage");
    bool stopped = !rec.stages.empty() && kStopCases.count(rec.stages.back().case_taken);
    if (rec.complete) {
      if (!rec.error.empty()) defect("complete record carries an error");
      if (rec.stages.size() != want) defect("complete record has " + std::to_string(rec.stages.size()) + " of " +
                                            std::to_string(want) + " stages");
      if (stopped) defect("complete record ends in a stopped stage");
    } else {
      if (rec.error.empty()) defect("incomplete record without an error");
      if (!stopped) defect("incomplete record does not end in a stopped stage");
      if (rec.stages.size() > want) defect("record has more stages than requested");
    }
  }

  void shape() {
    const auto& t = rec.final_tree;
    if (!t.contains(rec.final_stem)) {
      defect("final stem " + rec.final_stem.pretty() + " is not in the final tree");
      return;
    }
    ShapeCheck v;
    if (rec.engine == "surviving") {
      v = is_k_branching_to_depth(t, rec.parameters.at("k").get<std::size_t>() + 1, depth);
    } else if (rec.engine == "build3" || rec.engine == "traceable") {
      v = is_k_tree_to_depth(t, 3, depth);
    } else if (rec.engine == "accelerating") {
      v = is_accelerating_to_depth(t, depth);
    } else {
      defect("unknown engine " + rec.engine);
      return;
    }
    if (v) defect("final tree shape: " + v->describe());
    if (rec.engine == "build3") {
      Word right;
      while (!t.children(right).empty()) right = right.child(t.children(right).back());
      if (!(right == rec.final_stem)) defect("final stem is not the rightmost branch");
    } else {
      for (std::size_t n = 0; n < rec.final_stem.size(); ++n)
        if (t.child_count(rec.final_stem.prefix(n)) != 1)
          defect("final tree branches below the stem at " + rec.final_stem.prefix(n).pretty());
    }
    if (rec.engine == "traceable") {
      if (!rec.labels) {
        defect("traceable record without labels");
      } else {
        for (const auto& m : label_defects({rec.final_stem, t, *rec.labels}, false)) defect("labels: " + m);
      }
      std::vector<std::size_t> sched = rec.parameters.at("schedule").get<std::vector<std::size_t>>();
      if (sched != schedule_prefix(2 * depth + 4)) defect("recorded schedule differs from 1,1,2,1,2,3,...");
    } else if (rec.labels) {
      defect("labels on a " + rec.engine + " record");
    }
  }
};

}  // namespace

VerifyReport verify_record(const ordered_json& doc) {
  VerifyReport rep;
  try {
    if (!doc.contains("digest") || !doc.at("digest").is_string()) rep.defects.push_back("missing digest");
    else if (doc.at("digest").get<std::string>() != compute_digest(doc)) rep.defects.push_back("digest mismatch");
    RunRecord rec = record_from_json(doc);
    AdversaryFamily fam = family_from_json(rec.family);
    Checker ck{rec, fam, rep, rec.parameters.at("depth").get<std::size_t>(),
               rec.parameters.value("fuel", std::size_t{0}), {}};
    ck.cert_stage.assign(rec.certificates.size(), std::nullopt);
    ck.stages();
    ck.shape();
    for (std::size_t i = 0; i < rec.certificates.size(); ++i) {
      try {
        ck.check(i);
      } catch (const std::exception& ex) {
        rep.defects.push_back("certificate " + std::to_string(i) + ": malformed: " + ex.what());
      }
    }
  } catch (const std::exception& ex) {
    rep.defects.push_back(std::string("malformed record: ") + ex.what());
  }
  return rep;
}

VerifyReport verify_record_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    VerifyReport rep;
    rep.defects.push_back(std::string("malformed record: ") + ex.what());
    return rep;
  }
  return verify_record(doc);
}

}  // namespace surv
