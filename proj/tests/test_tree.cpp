#include <doctest.h>

#include "support.hpp"
#include "surv/machine.hpp"
#include "surv/tree.hpp"
#include "surv/tree_io.hpp"

using namespace surv;
using namespace surv::testing;

namespace {

FiniteTree comb(std::size_t d) { return FiniteTree::closure_of({zeros(d)}, std::nullopt, d); }

FiniteTree binary_in_ternary(std::size_t d) {
  return grow(3, d, [](const Word&) { return std::vector<Letter>{0, 1}; });
}

}  // namespace

TEST_CASE("words order shortlex and by prefix") {
  Word a{0, 2}, b{0, 2, 1}, c{1};
  CHECK(a.is_prefix_of(b));
  CHECK_FALSE(b.is_prefix_of(a));
  CHECK(Word{}.is_prefix_of(c));
  CHECK(ShortLex{}(c, a));
  CHECK(a < c);
  CHECK(a.concat(Word{1}) == b);
  CHECK(b.parent() == a);
  CHECK(Word::parse(b.to_string()) == b);
}

TEST_CASE("contains on finite and staged trees") {
  CHECK(contains(FiniteTree::full(3, 3), Word{0, 2, 1}) == TriState::In);
  CHECK(contains(comb(5), Word{1}) == TriState::Out);
  auto adv = make_staged_tree(standard_library_specs()[0]);
  CHECK(adv.decide(Word{7}, 5) == TriState::Undecided);
  CHECK(contains(adv, Word{7}, 5) == TriState::Undecided);
}

TEST_CASE("children") {
  CHECK(children(FiniteTree::full(3, 3), Word{0}, 3) == std::vector<Letter>{0, 1, 2});
  CHECK(children(comb(5), Word{0, 0}, 10) == std::vector<Letter>{0});
  auto path = FiniteTree::from_words({Word{}, Word{2}}, std::nullopt, 1);
  CHECK(children(path, Word{2}, 5).empty());
  CHECK_THROWS_AS(children(path, Word{1}, 5), TreeError);
}

TEST_CASE("is_k_tree_to_depth") {
  CHECK_FALSE(is_k_tree_to_depth(binary_in_ternary(3), 2, 3));
  auto v = is_k_tree_to_depth(FiniteTree::full(3, 2), 2, 2);
  REQUIRE(v);
  CHECK(v->node == Word{});
  CHECK(v->observed_child_count == 3);
  CHECK_FALSE(is_k_tree_to_depth(comb(4), 2, 4));
  auto stub = FiniteTree::from_words({Word{}, Word{0}}, 3, 3);
  auto leaf = is_k_tree_to_depth(stub, 2, 3);
  REQUIRE(leaf);
  CHECK(leaf->node == Word{0});
}

TEST_CASE("is_k_branching_to_depth") {
  CHECK_FALSE(is_k_branching_to_depth(binary_in_ternary(3), 2, 3));
  auto t = FiniteTree::closure_of({Word{0, 0}, Word{0, 1}, Word{0, 2}, Word{1, 0}, Word{1, 2}, Word{2, 0},
                                   Word{2, 1}, Word{2, 2}},
                                  3, 2);
  auto v = is_k_branching_to_depth(t, 3, 2);
  REQUIRE(v);
  CHECK(v->node == Word{1});
  CHECK(v->observed_child_count == 2);
  CHECK_FALSE(is_k_branching_to_depth(comb(5), 2, 5));
}

TEST_CASE("is_accelerating_to_depth") {
  std::vector<Word> leaves;
  for (Letter a = 0; a < 3; ++a)
    for (Letter b = 0; b < (a == 0 ? 4u : 1u); ++b) leaves.push_back(Word{a, b});
  CHECK_FALSE(is_accelerating_to_depth(FiniteTree::closure_of(leaves, std::nullopt, 2), 2));
  auto bad = is_accelerating_to_depth(FiniteTree::full(2, 1), 1);
  REQUIRE(bad);
  CHECK(bad->node == Word{});
  CHECK_FALSE(is_accelerating_to_depth(comb(6), 6));
  // second split needs four children
  std::vector<Word> thin;
  for (Letter a = 0; a < 3; ++a)
    for (Letter b = 0; b < 3; ++b) thin.push_back(Word{a, b});
  auto v = is_accelerating_to_depth(FiniteTree::closure_of(thin, std::nullopt, 2), 2);
  REQUIRE(v);
  CHECK(v->node == Word{0});
}

TEST_CASE("pushforward_preimage examples") {
  Rng rng(11);
  auto id = Surjection::identity(3);
  for (int i = 0; i < 20; ++i) {
    auto t = random_tree(rng, 3, 3);
    CHECK(pushforward_preimage(t, id) == t);
  }
  Surjection swap({0, 2, 1}, 3);
  auto path = FiniteTree::closure_of({Word{0, 1}}, 3, 2);
  CHECK(pushforward_preimage(path, swap) == FiniteTree::closure_of({Word{0, 2}}, 3, 2));
  Surjection g({0, 1, 2, 2}, 3);
  auto u = binary_in_ternary(3);
  auto pre = pushforward_preimage(u, g);
  // recount: every node's children are the g-preimages of its image's children
  for (const auto& w : pre.nodes_shortlex()) {
    if (w.size() == 3) continue;
    std::size_t expect = 0;
    for (Letter c : u.children(map_path(g, w))) expect += c == 2 ? 2 : 1;
    CHECK(pre.child_count(w) == expect);
  }
  CHECK_FALSE(is_k_tree_to_depth(pre, 3, 3));
  CHECK_THROWS_AS(pushforward_preimage(FiniteTree::full(4, 2), g), TreeError);
}

TEST_CASE("map_path") {
  CHECK(map_path(Surjection::identity(3), Word{0, 2, 1}) == Word{0, 2, 1});
  Surjection g({0, 0, 1}, 2);
  CHECK(map_path(g, Word{2, 1, 0}) == Word{1, 0, 0});
  CHECK(map_path(g, Word{}) == Word{});
  CHECK_THROWS(map_path(g, Word{3}));
}

TEST_CASE("surjection validation") {
  CHECK_THROWS(Surjection({0, 0, 0}, 2));
  CHECK_THROWS(Surjection({0}, 1));
  CHECK_THROWS(Surjection({0, 1, 3}, 3));
}

TEST_CASE("embed_branching") {
  auto t = grow(std::nullopt, 2, [](const Word&) { return std::vector<Letter>{0, 1}; });
  CHECK(embed_branching(t, 2, 2, 2) == t);
  CHECK(embed_branching(comb(4), 2, 3, 4) == comb(4));
  auto e = embed_branching(t, 2, 3, 2);
  CHECK_FALSE(is_k_branching_to_depth(e, 3, 2));
  CHECK(e.contains(Word{2, 0}));
  CHECK(e.child_count(Word{2}) == 1);
  for (const auto& w : t.nodes_shortlex()) CHECK(e.contains(w));
  CHECK_THROWS_AS(embed_branching(FiniteTree::full(3, 2), 2, 3, 2), TreeError);
}

TEST_CASE("restrict") {
  CHECK(restrict(FiniteTree::full(5, 2), 3) == FiniteTree::full(3, 2));
  auto fives = FiniteTree::closure_of({Word{5, 5, 5}}, std::nullopt, 3);
  auto r = restrict(fives, 3);
  CHECK(r.size() == 1);
  CHECK(r.contains(Word{}));
}

TEST_CASE("covered_fraction") {
  CHECK(covered_fraction(FiniteTree::full(3, 3), 3) == Fraction(1));
  CHECK(covered_fraction(FiniteTree::closure_of({Word{1, 2, 0}}, 3, 3), 3) == Fraction(1, 27));
  CHECK(covered_fraction(binary_in_ternary(2), 2) == Fraction(4, 9));
}

TEST_CASE("tree text round trip and diagnostics") {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    auto t = random_tree(rng, 4, 4);
    CHECK(read_tree(write_tree(t)) == t);
  }
  auto omega = FiniteTree::closure_of({Word{12, 0}}, std::nullopt, 2);
  CHECK(read_tree(write_tree(omega)) == omega);
  try {
    read_tree("tree alphabet=3 depth=2\n\n0\n0 5\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(read_tree("tree alphabet=3 depth=2\n\n1 0\n"), ParseError);
  CHECK_THROWS_AS(read_tree("tree depth=x\n"), ParseError);
  auto g = read_surjection("surjection codomain=3\n0 1 2 2\n");
  CHECK(g.table() == std::vector<Letter>{0, 1, 2, 2});
  CHECK(read_surjection(write_surjection(g)).table() == g.table());
  CHECK_THROWS_AS(read_surjection("surjection codomain=3\n0 1 1\n"), ParseError);
}

TEST_CASE("dot output highlights splits") {
  auto dot = to_dot(binary_in_ternary(1));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}
