#include <doctest.h>

#include "support.hpp"
#include "surv/machine.hpp"

using namespace surv;
using namespace surv::testing;

namespace {

const StagedTree& lib_tree(const AdversaryFamily& f, std::size_t id) { return *f.tree_by_id(id); }

Word random_word(Rng& rng, std::size_t b, std::size_t max_len) {
  Word w;
  std::size_t n = pick(rng, 0, max_len);
  for (std::size_t i = 0; i < n; ++i) w.push_back(static_cast<Letter>(pick(rng, 0, b - 1)));
  return w;
}

}  // namespace

TEST_CASE("looks_like_branching examples") {
  auto lib = standard_library();
  CHECK(looks_like_branching(lib_tree(lib, 4), 2, Word{}, 5) == Looks::No);
  StagedTree root_only(AdversarySpec{99, "custom", {}, Claim{}}, [](const Word& w, std::size_t) {
    return w.empty() ? TriState::In : TriState::Undecided;
  });
  CHECK(looks_like_branching(root_only, 2, Word{}, 8) == Looks::Undecided);
  CHECK(looks_like_branching(lib_tree(lib, 0), 2, Word{}, 6) == Looks::Yes);
  CHECK(looks_like_branching(lib_tree(lib, 3), 2, Word{}, 5) == Looks::Undecided);
  CHECK(looks_like_branching(lib_tree(lib, 0), 2, Word{2}, 6) == Looks::No);
}

TEST_CASE("looks_like_branching is consistent across stages") {
  auto lib = standard_library();
  for (const auto& t : lib.trees) {
    std::size_t k = t.claim() ? t.claim()->k : 2;
    bool seen_yes = false;
    for (std::size_t s = 1; s <= 20; ++s) {
      auto l = looks_like_branching(t, k, Word{}, s);
      if (t.id() == 0) {
        if (seen_yes) CHECK(l == Looks::Yes);
        seen_yes = seen_yes || l == Looks::Yes;
      }
    }
    if (t.id() == 0) CHECK(seen_yes);
  }
}

TEST_CASE("eval_total_on examples") {
  auto lib = standard_library();
  CHECK(eval_total_on(*lib.functional_by_id(0), Word{1, 0, 2}, 3, 3) == Word{1, 0, 2});
  CHECK(eval_total_on(*lib.functional_by_id(1), Word{}, 1, 1) == Word{3});
  CHECK_FALSE(eval_total_on(*lib.functional_by_id(3), Word{1, 2, 3}, 1, 1000000));
  CHECK_FALSE(eval_total_on(*lib.functional_by_id(0), Word{1, 0, 2}, 4, 100));
  CHECK(converged_length(*lib.functional_by_id(4), Word{5, 5, 5}, 16, 3) == 2);
  CHECK(converged_output(*lib.functional_by_id(2), Word{4, 5, 6}, 10, 5) == Word{1, 2, 0});
}

TEST_CASE("standard library shape") {
  auto lib = standard_library();
  CHECK(lib.trees.size() == 6);
  CHECK(lib.functionals.size() == 7);
  auto again = standard_library();
  CHECK(family_to_json(lib) == family_to_json(again));
  Rng rng(7);
  const auto& mod3 = *lib.functional_by_id(2);
  for (int i = 0; i < 2000; ++i) {
    auto s = random_word(rng, 1000, 8);
    for (std::size_t n = 0; n < s.size(); ++n) {
      auto v = mod3.eval(s, n, 100);
      REQUIRE(v);
      CHECK(*v < 3);
    }
  }
}

TEST_CASE("pairing is a bijection onto pairs with k > 2") {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t n = 0; n < 100; ++n) {
    auto [e, k] = unpair_code(n);
    CHECK(k > 2);
    CHECK(pair_code(e, k) == n);
    CHECK(seen.insert({e, k}).second);
  }
  for (std::size_t e = 0; e < 10; ++e)
    for (std::size_t k = 3; k < 10; ++k) CHECK(unpair_code(pair_code(e, k)) == std::make_pair(e, k));
}

TEST_CASE("staged tree contracts under random probes") {
  auto lib = standard_library();
  Rng rng(17);
  for (const auto& t : lib.trees) {
    for (int i = 0; i < 3000; ++i) {
      auto w = random_word(rng, 6, 6);
      std::size_t s = pick(rng, 0, 20);
      auto r = t.decide(w, s);
      if (r != TriState::Undecided) CHECK(t.decide(w, s + 10) == r);
      if (r == TriState::In && !w.empty()) CHECK(t.decide(w.parent(), s) == TriState::In);
      if (!w.empty() && w.max_entry() >= s) CHECK(r == TriState::Undecided);
      if (w.size() >= s) CHECK(r == TriState::Undecided);
    }
  }
}

TEST_CASE("functionals are fuel and use monotone") {
  auto lib = standard_library();
  Rng rng(19);
  std::size_t probes = 0;
  for (const auto& f : lib.functionals) {
    for (int i = 0; i < 2000; ++i) {
      auto s = random_word(rng, 7, 6);
      std::size_t n = pick(rng, 0, 6), fuel = pick(rng, 0, 40);
      auto v = f.eval(s, n, fuel);
      CHECK(f.eval(s, n, fuel) == v);
      if (!v) continue;
      ++probes;
      CHECK(f.eval(s, n, fuel + pick(rng, 1, 50)) == v);
      auto ext = s;
      ext.push_back(static_cast<Letter>(pick(rng, 0, 6)));
      CHECK(f.eval(ext, n, fuel) == v);
    }
  }
  CHECK(probes >= 5000);
}

TEST_CASE("family documents") {
  auto lib = standard_library();
  auto doc = family_to_json(lib);
  auto back = family_from_json(doc);
  CHECK(family_to_json(back) == doc);
  CHECK(back.specs() == lib.specs());

  auto bad = doc;
  bad["adversaries"][2]["kind"] = "teleport";
  try {
    family_from_json(bad);
    FAIL("expected a family error");
  } catch (const FamilyError& e) {
    CHECK(std::string(e.what()).find("entry 2") != std::string::npos);
    CHECK(std::string(e.what()).find("teleport") != std::string::npos);
  }
  auto dup = doc;
  dup["adversaries"][1]["id"] = 0;
  CHECK_THROWS_AS(family_from_json(dup), FamilyError);
  CHECK_THROWS_AS(load_family("{not json"), FamilyError);
  CHECK_THROWS_AS(load_family(R"({"adversaries":[{"id":0,"kind":"full_ary","params":{}}]})"), FamilyError);
}

TEST_CASE("staged pushforward agrees with the finite one") {
  auto lib = standard_library();
  Surjection g({0, 1, 1}, 2);
  auto pre = pushforward_preimage(lib_tree(lib, 0), g);
  auto finite = pushforward_preimage(FiniteTree::full(2, 3), g);
  for (const auto& w : all_words(4, 3)) {
    auto expect = finite.contains(w) ? TriState::In : TriState::Out;
    CHECK(pre.decide(w, 10) == expect);
  }
}
