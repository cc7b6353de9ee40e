#include <map>
#include <set>

#include "engine_util.hpp"
#include "surv/engines.hpp"

namespace surv {

LevelCode pairing_level_code() {
  return [](std::size_t n) -> std::optional<std::pair<std::size_t, std::size_t>> { return unpair_code(n); };
}

std::size_t default_build3_stages(std::size_t depth) { return 3 * depth + 3; }

namespace {

std::size_t in_children(const StagedTree& adv, const Word& p, std::size_t stage) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < stage; ++i)
    if (adv.decide(p.child(static_cast<Letter>(i)), stage) == TriState::In) ++count;
  return count;
}

}  // namespace

Build3Result build_3tree(const AdversaryFamily& family, std::size_t depth, std::size_t stages, const LevelCode& code) {
  std::map<Word, std::set<Letter>> kids{{Word{}, {}}};
  std::set<Word> forbidden;
  RunRecord rec;
  rec.engine = "build3";
  rec.parameters = {{"stages", stages}, {"depth", depth}};
  rec.family = family_to_json(family);

  for (std::size_t s = 0; s < stages; ++s) {
    std::vector<Word> admitted;
    std::size_t forbids = 0;
    auto forbid = [&](const Word& w) { forbids += forbidden.insert(w).second ? 1 : 0; };
    std::vector<Word> snapshot;
    for (const auto& [p, c] : kids)
      if (p.size() < depth) snapshot.push_back(p);
    for (const auto& p : snapshot) {
      const auto current = kids.at(p);
      admitted.push_back(p.child(0));
      if (s == 0) continue;
      auto pair = code(p.size());
      const StagedTree* adv = pair ? family.tree_by_id(pair->first) : nullptr;
      std::size_t k = pair ? pair->second : 0;
      Word ps = p.child(static_cast<Letter>(s));
      std::size_t extra = current.size() - current.count(0);
      if (extra == 0) {
        if (!adv || looks_like_branching(*adv, k, p, s) != Looks::Yes) {
          for (std::size_t i = 1; i <= s; ++i) forbid(p.child(static_cast<Letter>(i)));
        } else if (adv->decide(p.child(0), s) != TriState::In) {
          forbid(ps);
        } else if (adv->decide(ps, s) == TriState::In) {
          forbid(ps);
        } else if (!forbidden.count(ps)) {
          admitted.push_back(ps);
        }
      } else if (extra == 1) {
        if (adv && in_children(*adv, p, s) == k && !forbidden.count(ps)) admitted.push_back(ps);
        else forbid(ps);
      } else {
        forbid(ps);
      }
    }
    std::vector<Word> fresh;
    for (const auto& w : admitted) {
      if (kids.count(w)) continue;
      kids[w.parent()].insert(w.back());
      kids[w] = {};
      if (w.back() != 0) fresh.push_back(w);
    }
    StageEntry e;
    e.index = s;
    e.requirement = "grow";
    e.case_taken = fresh.empty() ? "zeros" : "admit";
    ordered_json list = ordered_json::array();
    for (const auto& w : fresh) list.push_back(word_to_json(w));
    e.witnesses = {{"admitted", list}, {"forbidden", forbids}};
    rec.stages.push_back(std::move(e));
  }

  std::vector<Word> words;
  for (const auto& [w, c] : kids) words.push_back(w.size() < depth && c.empty() ? w.concat(zeros(depth - w.size())) : w);
  FiniteTree tree = FiniteTree::closure_of(words, std::nullopt, depth);

  Word right;
  while (!tree.children(right).empty()) right = right.child(tree.children(right).back());

  std::size_t verify_stage = stages + depth + 1;
  rec.parameters["verification_stage"] = verify_stage;
  for (const auto& adv : family.trees) {
    for (std::size_t n = 0; n <= right.size(); ++n) {
      if (adv.decide(right.prefix(n), verify_stage) == TriState::Out) {
        rec.add_certificate(
            {"avoid", {{"tree", adv.id()}, {"node", word_to_json(right.prefix(n))}, {"stage", verify_stage}}});
        break;
      }
    }
  }
  rec.final_stem = right;
  rec.final_tree = tree;
  return {tree, right, std::move(rec)};
}

}  // namespace surv
