#include <doctest.h>

#include "support.hpp"
#include "surv/engines.hpp"
#include "surv/verify.hpp"

using namespace surv;
using namespace surv::testing;

namespace {

AdversarySpec honest_binary(std::size_t id = 0) {
  return AdversarySpec{id, "full_ary", {{"b", 2}}, Claim{ShapeKind::KBranching, 2}};
}

AdversarySpec functional(std::size_t id, std::string kind, std::map<std::string, std::int64_t> params = {}) {
  return AdversarySpec{id, std::move(kind), std::move(params), std::nullopt};
}

void require_verified(const RunRecord& rec) {
  auto rep = verify_record(record_to_json(rec));
  std::string all;
  for (const auto& d : rep.defects) all += d + "\n";
  CHECK_MESSAGE(rep.ok(), all);
}

}  // namespace

TEST_CASE("surviving: empty family leaves the full tree") {
  auto rec = diagonalize_surviving(2, AdversaryFamily{}, 0, 4, 100);
  CHECK(rec.complete);
  CHECK(rec.final_stem == Word{});
  CHECK(rec.final_tree == FiniteTree::full(3, 4));
  require_verified(rec);
}

TEST_CASE("surviving: an honest binary adversary is exited at 2") {
  auto fam = build_family({honest_binary()});
  auto rec = diagonalize_surviving(2, fam, 1, 6, 1000);
  REQUIRE(rec.complete);
  REQUIRE_FALSE(rec.final_stem.empty());
  CHECK(rec.final_stem[0] == 2);
  CHECK(rec.stages[0].case_taken == "exit");
  CHECK(contains(fam.trees[0], rec.final_stem, 1000) == TriState::Out);
  CHECK_FALSE(is_k_branching_to_depth(rec.final_tree, 3, 6));
  require_verified(rec);
}

TEST_CASE("surviving: identity takes the splitting case and traces the tree itself") {
  auto fam = build_family({functional(0, "identity")});
  auto rec = diagonalize_surviving(2, fam, 2, 5, 1000);
  REQUIRE(rec.complete);
  CHECK(rec.stages[1].case_taken == "splitting");
  REQUIRE(rec.traces.size() == 1);
  const auto& tr = rec.traces[0];
  for (std::size_t n = 0; n <= tr.depth(); ++n) {
    CHECK(tr.level(n).size() <= LevelBound::pow(3).at(n));
    auto level = rec.final_tree.level(n);
    std::set<Word> lv(level.begin(), level.end());
    CHECK(tr.level(n) == lv);
  }
  require_verified(rec);
}

TEST_CASE("surviving: library run") {
  auto lib = standard_library();
  auto rec = diagonalize_surviving(2, lib, 12, 6, 10000);
  CHECK(rec.complete);
  for (const auto& c : rec.certificates)
    if (c.kind == "avoid") {
      const auto* t = lib.tree_by_id(c.data.at("tree").get<std::size_t>());
      CHECK(contains(*t, word_from_json(c.data.at("node")), c.data.at("stage").get<std::size_t>()) ==
            TriState::Out);
    }
  require_verified(rec);
  CHECK_THROWS_AS(diagonalize_surviving(2, standard_library(), 15, 6, 100), std::invalid_argument);
}

TEST_CASE("build_3tree: nothing looks branching gives the zero comb") {
  auto r = build_3tree(AdversaryFamily{}, 8, default_build3_stages(8));
  CHECK(r.tree == FiniteTree::closure_of({zeros(8)}, std::nullopt, 8));
  CHECK(r.rightmost == zeros(8));
  require_verified(r.record);
}

TEST_CASE("build_3tree: an honest 3-branching claimant forces a split of exactly three") {
  auto fam = build_family({AdversarySpec{0, "full_ary", {{"b", 3}}, Claim{ShapeKind::KBranching, 3}}});
  LevelCode code = [](std::size_t n) -> std::optional<std::pair<std::size_t, std::size_t>> {
    if (n == 1) return std::make_pair(std::size_t{0}, std::size_t{3});
    return std::nullopt;
  };
  std::size_t most = 0;
  for (std::size_t stages = 1; stages <= 12; ++stages) {
    auto r = build_3tree(fam, 6, stages, code);
    CHECK_FALSE(is_k_tree_to_depth(r.tree, 3, 6));
    for (const auto& w : r.tree.level(1)) most = std::max(most, r.tree.child_count(w));
  }
  CHECK(most == 3);
}

TEST_CASE("build_3tree: library output is a 3-tree whose rightmost path leaves each honest claimant") {
  auto fam = standard_library();
  auto r = build_3tree(fam, 12, default_build3_stages(12));
  CHECK_FALSE(is_k_tree_to_depth(r.tree, 3, 12));
  CHECK(r.rightmost.size() == 12);
  for (const auto& t : fam.trees) {
    if (t.id() != 0 && t.id() != 2) continue;
    bool out = false;
    for (std::size_t n = 0; n <= r.rightmost.size(); ++n)
      out = out || contains(t, r.rightmost.prefix(n), 1000) == TriState::Out;
    CHECK_MESSAGE(out, "claimant " << t.id());
  }
  require_verified(r.record);
}

TEST_CASE("traceable: schedule and start labels") {
  CHECK(schedule_prefix(10) == std::vector<std::size_t>{1, 1, 2, 1, 2, 3, 1, 2, 3, 4});
  auto sched = schedule_prefix(7);
  auto start = traceable_start(standard_library(), 6, default_build3_stages(6));
  for (const auto& [w, g] : start.labels) CHECK(g == sched[w.size()]);
  CHECK(label_defects(start, true).empty());
}

TEST_CASE("traceable: identity on a 3-tree is traced within 3^n") {
  auto fam = build_family({functional(0, "identity")});
  auto start = traceable_start(fam, 6, default_build3_stages(6));
  auto rec = traceable_prune(start, fam, 2, 6, 2000);
  REQUIRE(rec.traces.size() == 1);
  const auto& tr = rec.traces[0];
  for (std::size_t n = 0; n <= tr.depth(); ++n) CHECK(tr.level(n).size() <= LevelBound::pow(3).at(n));
  for (const auto& w : rec.final_tree.level(rec.final_tree.depth()))
    CHECK(goes_through(w.prefix(tr.depth()), tr));
  require_verified(rec);
}

TEST_CASE("accelerating: cases on small families") {
  auto fam = build_family({honest_binary(), functional(0, "constant", {{"value", 3}}), functional(1, "mod", {{"m", 3}})});
  auto rec = accelerating_force(fam, 4, 8, 10000);
  REQUIRE(rec.complete);
  CHECK(rec.stages[0].case_taken == "exit");
  CHECK(rec.final_stem.prefix(1) == Word{2});
  CHECK(rec.stages[1].case_taken == "large_output");
  for (const auto& c : rec.certificates)
    if (c.kind == "output_ge3") CHECK(c.data.at("n") == 0);
  CHECK(rec.stages[3].case_taken == "majority");
  REQUIRE(rec.traces.size() == 1);
  CHECK_FALSE(is_k_tree_to_depth(rec.traces[0].as_tree(), 2, rec.traces[0].depth()));
  CHECK_FALSE(is_accelerating_to_depth(rec.final_tree, 8));
  require_verified(rec);
}

TEST_CASE("accelerating: the skeleton is accelerating") {
  for (std::size_t d = 0; d <= 8; ++d) {
    auto s = accelerating_skeleton(Word{}, d);
    CHECK_FALSE(is_accelerating_to_depth(s, d));
  }
  auto above = accelerating_skeleton(Word{4, 1}, 6);
  CHECK(above.contains(Word{4, 1}));
  CHECK(above.child_count(Word{4}) == 1);
}

TEST_CASE("engines are deterministic") {
  auto lib = standard_library();
  CHECK(serialize_record(diagonalize_surviving(2, lib, 12, 5, 5000)) ==
        serialize_record(diagonalize_surviving(2, lib, 12, 5, 5000)));
  CHECK(serialize_record(build_3tree(lib, 8, 20).record) == serialize_record(build_3tree(lib, 8, 20).record));
  auto start = traceable_start(lib, 5, default_build3_stages(5));
  CHECK(serialize_record(traceable_prune(start, lib, 8, 5, 2000)) ==
        serialize_record(traceable_prune(start, lib, 8, 5, 2000)));
  CHECK(serialize_record(accelerating_force(lib, 8, 8, 5000)) ==
        serialize_record(accelerating_force(lib, 8, 8, 5000)));
}

TEST_CASE("more fuel never loses a satisfied requirement") {
  auto lib = standard_library();
  auto weak = std::set<std::string>{"unmet", "fuel_exhausted", "candidate_shortage", "stopped"};
  for (std::size_t fuel : {20, 200, 2000}) {
    auto lo = diagonalize_surviving(2, lib, 12, 5, fuel), hi = diagonalize_surviving(2, lib, 12, 5, fuel * 10);
    for (std::size_t i = 0; i < std::min(lo.stages.size(), hi.stages.size()); ++i)
      if (!weak.count(lo.stages[i].case_taken)) CHECK_FALSE(weak.count(hi.stages[i].case_taken));
    CHECK(lo.stages.size() <= hi.stages.size());
  }
}

TEST_CASE("traceable: pruning a full labeled 3-tree keeps splits and traces within 3^n") {
  auto fam = build_family({functional(0, "identity"), functional(1, "mod", {{"m", 3}})});
  auto start = traceable_full_start(6);
  CHECK(label_defects(start, true).empty());
  auto rec = traceable_prune(start, fam, 4, 6, 10000);
  REQUIRE(rec.complete);
  CHECK(rec.stages[1].case_taken == "prune");
  CHECK(rec.stages[1].witnesses.at("splits").get<std::size_t>() > 0);
  CHECK_FALSE(is_k_tree_to_depth(rec.final_tree, 3, 6));
  REQUIRE(rec.traces.size() == 2);
  for (const auto& tr : rec.traces) {
    for (std::size_t n = 0; n <= tr.depth(); ++n) CHECK(tr.level(n).size() <= LevelBound::pow(3).at(n));
  }
  for (const auto& w : rec.final_tree.level(6)) {
    CHECK(goes_through(w.prefix(rec.traces[0].depth()), rec.traces[0]));
  }
  require_verified(rec);
}
