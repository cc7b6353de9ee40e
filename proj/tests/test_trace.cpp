#include <doctest.h>

#include "support.hpp"
#include "surv/trace.hpp"

using namespace surv;
using namespace surv::testing;

namespace {

FiniteTree binary(std::size_t d) { return grow(std::nullopt, d, [](const Word&) { return std::vector<Letter>{0, 1}; }); }

TraceTable path_trace(Letter c, std::size_t d) {
  Word w;
  for (std::size_t i = 0; i < d; ++i) w.push_back(c);
  return from_tree(FiniteTree::closure_of({w}, std::nullopt, d), LevelBound::pow(2));
}

}  // namespace

TEST_CASE("from_tree examples") {
  auto tr = from_tree(binary(3), LevelBound::pow(3));
  for (std::size_t n = 0; n <= 3; ++n) CHECK(tr.level(n).size() == (std::size_t{1} << n));
  auto path = path_trace(4, 5);
  for (std::size_t n = 0; n <= 5; ++n) CHECK(path.level(n).size() == 1);
  try {
    from_tree(FiniteTree::full(3, 2), LevelBound::pow(2));  // level 1 already has 3 > 2
    FAIL("expected BoundExceeded");
  } catch (const BoundExceeded& e) {
    CHECK(e.level() == 1);
  }
  CHECK_THROWS_AS(from_tree(FiniteTree::full(3, 1), LevelBound::constant(2)), BoundExceeded);
}

TEST_CASE("goes_through examples") {
  auto tr = from_tree(binary(3), LevelBound::pow(2));
  CHECK(goes_through(Word{}, tr));
  CHECK(goes_through(Word{0, 1}, tr));
  CHECK_FALSE(goes_through(Word{2}, tr));
  CHECK_FALSE(goes_through(Word{0, 2, 1}, tr));
}

TEST_CASE("merge examples") {
  auto tr = from_tree(binary(3), LevelBound::pow(2));
  CHECK(merge(tr, tr, LevelBound::pow(2)) == tr);
  auto m = merge(path_trace(0, 4), path_trace(1, 4), LevelBound::constant(2));
  for (std::size_t n = 1; n <= 4; ++n) CHECK(m.level(n).size() == 2);
  auto ones_twos = from_tree(grow(std::nullopt, 2, [](const Word&) { return std::vector<Letter>{1, 2}; }),
                             LevelBound::pow(3));
  auto u = merge(from_tree(binary(2), LevelBound::pow(3)), ones_twos, LevelBound::pow(3));
  CHECK(u.level(1).size() == 3);
  CHECK(u.level(2).size() == 7);
  CHECK_THROWS_AS(merge(path_trace(0, 4), path_trace(1, 4), LevelBound::constant(1)), BoundExceeded);
  CHECK_THROWS_AS(merge(path_trace(0, 4), path_trace(1, 3), LevelBound::constant(2)), TraceError);
}

TEST_CASE("trace invariants on construction") {
  CHECK_THROWS_AS(TraceTable::from_levels({{Word{}}, {Word{0, 1}}}, LevelBound::pow(3)), TraceError);
  CHECK_THROWS_AS(TraceTable::from_levels({{Word{}}, {Word{0}}, {Word{1, 0}}}, LevelBound::pow(3)), TraceError);
  auto tr = TraceTable::from_levels({{Word{}}, {Word{0}, Word{2}}}, LevelBound::pow(3));
  CHECK(tr.position_values(0) == std::set<Letter>{0, 2});
}

TEST_CASE("round trips and membership agree with the tree") {
  Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    std::size_t d = pick(rng, 1, 5);
    auto u = random_tree(rng, 3, d);
    if (u.empty()) continue;
    // only trees whose every node reaches depth d are traces of themselves
    auto live = FiniteTree::closure_of(u.level(d), 3, d);
    if (live.empty()) continue;
    auto tr = from_tree(live, LevelBound::pow(3));
    CHECK(from_tree(tr.as_tree(), LevelBound::pow(3)) == tr);
    CHECK(read_trace(write_trace(tr)) == tr);
    for (std::size_t n = 0; n <= d; ++n)
      for (const auto& w : all_words(3, n)) CHECK(goes_through(w, tr) == live.contains(w));
  }
}

TEST_CASE("level bounds") {
  CHECK(LevelBound::pow(3).at(4) == 81);
  CHECK(LevelBound::constant(5).at(40) == 5);
  CHECK(LevelBound::pow(3).at(200) == std::numeric_limits<std::size_t>::max());
  CHECK(LevelBound::parse(LevelBound::pow(4).to_string()) == LevelBound::pow(4));
  CHECK(LevelBound::parse(LevelBound::constant(2).to_string()) == LevelBound::constant(2));
  CHECK_THROWS(LevelBound::parse("exp:2"));
}
