#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "mutations.hpp"
#include "support.hpp"
#include "surv/cover.hpp"
#include "surv/engines.hpp"
#include "surv/verify.hpp"

using namespace surv;
using namespace surv::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void fail(const std::string& why) {
    if (pass) note << why;
    pass = false;
  }
};

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_s) o.fail("over time");
  if (!o.pass) ++failures;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, limit_s);
  std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << "  [" << o.note.str()
            << "] (" << timing << ")" << std::endl;
}

// Surjections (k+1) -> (s+1) up to relabeling both sides: one per multiset of
// fiber sizes, fibers listed in non-decreasing size.
std::vector<Surjection> canonical_surjections(std::size_t k, std::size_t s) {
  std::vector<Surjection> out;
  std::vector<std::size_t> parts;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t least) {
    if (parts.size() == s + 1) {
      if (left) return;
      std::vector<Letter> table;
      for (std::size_t i = 0; i < parts.size(); ++i) table.insert(table.end(), parts[i], static_cast<Letter>(i));
      out.emplace_back(table, static_cast<Letter>(s + 1));
      return;
    }
    for (std::size_t p = least; p <= left; ++p) {
      parts.push_back(p);
      rec(left - p, p);
      parts.pop_back();
    }
  };
  rec(k + 1, 1);
  return out;
}

// Shape and path transfer for one (T, g) pair; words of length d are checked
// exhaustively when there are at most `cap` of them, else `cap` are sampled.
bool transfer_holds(const FiniteTree& t, const Surjection& g, std::size_t k, std::size_t d, Rng* rng,
                    std::size_t cap) {
  auto pre = pushforward_preimage(t, g);
  if (is_k_tree_to_depth(pre, k, d)) return false;
  auto probe = [&](const Word& w) { return pre.contains(w) == t.contains(map_path(g, w)); };
  double total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<double>(k + 1);
  if (!rng || total <= static_cast<double>(cap)) {
    static std::map<std::pair<std::size_t, std::size_t>, std::vector<Word>> cache;
    for (std::size_t n = 0; n <= d; ++n) {
      auto& words = cache[{k + 1, n}];
      if (words.empty()) words = all_words(k + 1, n);
      for (const auto& w : words)
        if (!probe(w)) return false;
    }
    return true;
  }
  for (std::size_t i = 0; i < cap; ++i) {
    Word w;
    for (std::size_t j = 0; j < d; ++j) w.push_back(static_cast<Letter>(pick(*rng, 0, k)));
    if (!probe(w)) return false;
  }
  for (const auto& w : pre.level(d))
    if (!probe(w)) return false;
  return true;
}

// Every k-tree over b of depth at most d, including the shallower ones.
void for_each_small_tree(std::size_t b, std::size_t k, std::size_t d, const std::function<void(const FiniteTree&, std::size_t)>& f) {
  for (std::size_t depth = 1; depth <= d; ++depth) for_each_k_tree(b, k, depth, [&](const FiniteTree& t) { f(t, depth); });
}

std::size_t stage_of_certificate(const RunRecord& rec, std::size_t cert) {
  for (const auto& s : rec.stages)
    for (auto c : s.certificates)
      if (c == cert) return s.index;
  return rec.stages.size();
}

// Checks every trace certificate independently of the verifier: the level
// bound, and go-through of every final-tree branch above the certified node.
void check_traces(const RunRecord& rec, const AdversaryFamily& fam, const std::function<bool(const TraceTable&)>& bound_ok,
                  Outcome& o, std::size_t& traces, std::size_t& branches) {
  for (std::size_t i = 0; i < rec.certificates.size(); ++i) {
    const auto& c = rec.certificates[i];
    if (c.kind != "trace") continue;
    ++traces;
    const auto& tr = rec.traces.at(c.data.at("trace").get<std::size_t>());
    if (!bound_ok(tr)) o.fail("trace " + std::to_string(i) + " breaks its bound");
    const auto* f = fam.functional_by_id(c.data.at("functional").get<std::size_t>());
    auto fuel = c.data.at("fuel").get<std::size_t>();
    for (const auto& leaf : rec.final_tree.leaves_above(word_from_json(c.data.at("node")))) {
      ++branches;
      auto out = converged_output(*f, leaf, fuel, tr.depth());
      if (out.size() < tr.depth() || !goes_through(out, tr)) o.fail("branch " + leaf.pretty() + " leaves its trace");
    }
  }
}

bool within(const TraceTable& tr, LevelBound b) {
  for (std::size_t n = 0; n <= tr.depth(); ++n)
    if (tr.level(n).size() > b.at(n)) return false;
  return true;
}

void check_avoidance(const RunRecord& rec, const AdversaryFamily& fam, Outcome& o, std::size_t& count) {
  for (const auto& c : rec.certificates) {
    if (c.kind != "avoid") continue;
    ++count;
    Word node = word_from_json(c.data.at("node"));
    const auto* t = fam.tree_by_id(c.data.at("tree").get<std::size_t>());
    if (contains(*t, node, c.data.at("stage").get<std::size_t>()) != TriState::Out)
      o.fail("avoid node " + node.pretty() + " is not Out");
    if (!node.is_prefix_of(rec.final_stem)) o.fail("avoid node " + node.pretty() + " is off the stem");
  }
}

void check_verifier(const RunRecord& rec, Outcome& o) {
  auto rep = verify_record_text(serialize_record(rec));
  if (!rep.ok()) o.fail("verifier: " + rep.defects.front());
}

void criterion1() {
  criterion(1, "preimages of s-trees are k-trees; path transfer", 10, [](Outcome& o) {
    std::size_t pairs = 0;
    // Exhaustive depth per s: s-trees over s+1 grow too fast beyond these.
    const std::size_t exhaustive_depth[] = {0, 0, 3, 2, 1};
    for (std::size_t s = 2; s <= 4; ++s) {
      std::vector<std::pair<std::size_t, Surjection>> gs;
      for (std::size_t k = s; k <= 4; ++k)
        for (auto& g : canonical_surjections(k, s)) gs.emplace_back(k, g);
      for_each_small_tree(s + 1, s, exhaustive_depth[s], [&](const FiniteTree& t, std::size_t d) {
        for (const auto& [k, g] : gs) {
          ++pairs;
          if (!transfer_holds(t, g, k, d, nullptr, 0)) o.fail("failure at s=" + std::to_string(s));
        }
      });
    }
    Rng rng(2024);
    std::size_t random = 0;
    for (; random < 500; ++random) {
      std::size_t s = pick(rng, 2, 4), k = pick(rng, s, 4), d = pick(rng, 4, 6);
      auto t = random_k_tree(rng, s + 1, s, d);
      auto all = all_surjections(k + 1, s + 1);
      if (!transfer_holds(t, all[pick(rng, 0, all.size() - 1)], k, d, &rng, 4000)) o.fail("random failure");
    }
    o.note << pairs << " exhaustive pairs (s=2 to depth 3, s=3 to depth 2, s=4 to depth 1), " << random
           << " random deeper";
  });
}

void criterion2() {
  criterion(2, "2-branching subtrees of 3^{<=3} cover at most 8/27", 5, [](Outcome& o) {
    std::size_t count = 0;
    Fraction best(0);
    for_each_k_tree(3, 2, 3, [&](const FiniteTree& t) {
      ++count;
      if (is_k_branching_to_depth(t, 2, 3)) o.fail("enumerated tree is not 2-branching");
      best = std::max(best, covered_fraction(t, 3));
    });
    if (best != Fraction(8, 27)) o.fail("max coverage differs from 8/27");
    o.note << count << " trees, max coverage " << best.numerator() << "/" << best.denominator();
  });
}

void criterion3() {
  criterion(3, "min_cover values, witnesses and monotonicity", 10, [](Outcome& o) {
    auto [v1, w1] = min_cover(3, 2, 1);
    auto [v2, w2] = min_cover(3, 2, 2);
    if (v1 != 2) o.fail("(3,2,1) gave " + std::to_string(v1));
    if (v2 != 3) o.fail("(3,2,2) gave " + std::to_string(v2));
    if (verify_cover(w1) || verify_cover(w2)) o.fail("witness rejected");
    std::size_t rows = 0;
    for (std::size_t b = 3; b <= 4; ++b)
      for (std::size_t d = 1; d <= 2; ++d) {
        std::vector<std::size_t> ks;
        for (std::size_t k = 2; k < b; ++k) ks.push_back(k);
        auto table = monotonicity_table(b, d, ks);
        for (std::size_t i = 0; i < table.size(); ++i) {
          ++rows;
          if (verify_cover(table[i].witness)) o.fail("table witness rejected");
          if (i && table[i].value > table[i - 1].value) o.fail("table increases");
        }
      }
    o.note << "(3,2,1)=" << v1 << " (3,2,2)=" << v2 << ", " << rows << " table rows";
  });
}

void criterion4() {
  criterion(4, "surviving engine, k=2, library, depth 8", 60, [](Outcome& o) {
    auto lib = standard_library();
    if (lib.trees.size() < 5 || lib.functionals.size() < 4) o.fail("library too small");
    auto rec = diagonalize_surviving(2, lib, 2 * std::max(lib.trees.size(), lib.functionals.size()), 8, 10000);
    if (!rec.complete) o.fail("incomplete: " + rec.error);
    std::size_t avoid = 0, traces = 0, branches = 0;
    check_avoidance(rec, lib, o, avoid);
    check_traces(
        rec, lib, [](const TraceTable& tr) { return within(tr, LevelBound::pow(3)); }, o, traces, branches);
    for (std::size_t i = 0; i < rec.certificates.size(); ++i)
      if (rec.certificates[i].kind == "trace" &&
          rec.stages.at(stage_of_certificate(rec, i)).case_taken == "splitting" &&
          rec.traces.at(rec.certificates[i].data.at("trace").get<std::size_t>()).bound() != LevelBound::pow(3))
        o.fail("splitting trace declares another bound");
    if (auto v = is_k_branching_to_depth(rec.final_tree, 3, 8)) o.fail("final tree: " + v->describe());
    check_verifier(rec, o);
    o.note << avoid << " avoidance certificates, " << traces << " traces, " << branches << " branches";
  });
}

void criterion5() {
  criterion(5, "3-tree construction, depth 12", 30, [](Outcome& o) {
    auto lib = standard_library();
    auto r = build_3tree(lib, 12, default_build3_stages(12));
    if (auto v = is_k_tree_to_depth(r.tree, 3, 12)) o.fail("not a 3-tree: " + v->describe());
    std::size_t left = 0;
    for (const auto& t : lib.trees) {
      bool out = false;
      for (std::size_t n = 0; n <= r.rightmost.size() && !out; ++n)
        out = contains(t, r.rightmost.prefix(n), 10000) == TriState::Out;
      if (out) ++left;
      else o.fail("rightmost path stays inside claimant " + std::to_string(t.id()));
    }
    check_verifier(r.record, o);
    auto empty = build_3tree(AdversaryFamily{}, 12, default_build3_stages(12));
    if (!(empty.tree == FiniteTree::closure_of({zeros(12)}, std::nullopt, 12))) o.fail("empty family is not the zero comb");
    o.note << "rightmost path leaves " << left << "/" << lib.trees.size() << " claimants; empty family gives the zero comb";
  });
}

void criterion6() {
  criterion(6, "traceable engine, depth 8", 120, [](Outcome& o) {
    auto sched = schedule_prefix(10);
    if (sched != std::vector<std::size_t>{1, 1, 2, 1, 2, 3, 1, 2, 3, 4}) o.fail("schedule prefix differs");
    auto lib = standard_library();
    std::size_t traces = 0, branches = 0, conditions = 0;
    for (bool full : {false, true}) {
      auto start = full ? traceable_full_start(8) : traceable_start(lib, 8, default_build3_stages(8));
      ++conditions;
      if (!label_defects(start, true).empty()) o.fail("start labels");
      auto rec = traceable_prune(start, lib, 14, 8, 10000);
      if (!rec.complete) o.fail("incomplete: " + rec.error);
      for (const auto& s : rec.stages) {
        ++conditions;
        if (s.witnesses.value("label_defects", std::size_t{0}) != 0) o.fail("label defects after stage");
      }
      if (auto v = is_k_tree_to_depth(rec.final_tree, 3, 8)) o.fail("final tree: " + v->describe());
      check_traces(
          rec, lib, [](const TraceTable& tr) { return within(tr, LevelBound::pow(3)); }, o, traces, branches);
      check_verifier(rec, o);
    }
    o.note << conditions << " labeled conditions, " << traces << " traces, " << branches << " branches";
  });
}

void criterion7() {
  criterion(7, "accelerating engine, depth 12", 120, [](Outcome& o) {
    auto lib = standard_library();
    auto rec = accelerating_force(lib, 14, 12, 10000);
    if (!rec.complete) o.fail("incomplete: " + rec.error);
    if (auto v = is_accelerating_to_depth(rec.final_tree, 12)) o.fail("final tree: " + v->describe());
    std::size_t traces = 0, branches = 0;
    check_traces(
        rec, lib,
        [](const TraceTable& tr) { return within(tr, LevelBound::pow(2)) && !is_k_tree_to_depth(tr.as_tree(), 2, tr.depth()); },
        o, traces, branches);
    auto stage_for = [&](std::size_t fid) -> const StageEntry& {
      for (std::size_t i = 0; i < lib.functionals.size(); ++i)
        if (lib.functionals[i].id() == fid) return rec.stages.at(2 * i + 1);
      throw std::logic_error("functional missing");
    };
    const auto& mod = stage_for(2);
    if (mod.case_taken != "majority") o.fail("mod-3 took " + mod.case_taken);
    const auto& c3 = stage_for(1);
    if (c3.case_taken != "large_output") o.fail("constant-3 took " + c3.case_taken);
    for (auto ci : c3.certificates)
      if (rec.certificates[ci].data.at("n") != 0) o.fail("constant-3 witness n is not 0");
    check_verifier(rec, o);
    o.note << "mod-3 " << mod.case_taken << " (" << mod.witnesses.dump() << "), constant-3 " << c3.case_taken
           << " at n=0, " << traces << " traces, " << branches << " branches";
  });
}

void criterion8() {
  criterion(8, "golden suite determinism and mutation rejection", 120, [](Outcome& o) {
    std::map<std::string, std::string> texts;
    for (const auto& g : golden_suite()) {
      texts[g.name] = serialize_record(g.run());
      if (serialize_record(g.run()) != texts[g.name]) o.fail(g.name + " is not reproducible");
      if (!verify_record_text(texts[g.name]).ok()) o.fail(g.name + " does not verify");
    }
    std::size_t rejected = 0;
    auto cat = mutation_catalogue();
    for (const auto& m : cat) {
      auto doc = ordered_json::parse(texts.at(m.golden));
      auto before = doc;
      m.apply(doc);
      if (doc == before) o.fail("mutation '" + m.name + "' changed nothing");
      if (m.reseal) reseal(doc);
      if (!verify_record(doc).ok()) ++rejected;
      else o.fail("accepted: " + m.name);
    }
    if (cat.size() != 20) o.fail("catalogue has " + std::to_string(cat.size()) + " entries");
    o.note << texts.size() << " golden records byte-identical on rerun, " << rejected << "/" << cat.size()
           << " mutations rejected";
  });
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::cout << (failures ? "FAIL" : "PASS") << ": " << 8 - failures << "/8 criteria" << std::endl;
  return failures ? 1 : 0;
}
