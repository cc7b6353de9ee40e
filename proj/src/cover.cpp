#include "surv/cover.hpp"

#include <iomanip>
#include <sstream>

#include "surv/record.hpp"
#include "surv/tree_io.hpp"

namespace surv {

namespace {

// Depth-d member sets of a minimum cover, built level by level: m trees pick
// cyclically consecutive k-subsets of the root letters so that every letter
// lies in at least f(d-1) of them, each occurrence taking a distinct subcover tree.
std::vector<std::vector<Word>> cover_sets(std::size_t b, std::size_t k, std::size_t d) {
  if (d == 0) return {{Word{}}};
  auto sub = cover_sets(b, k, d - 1);
  std::size_t f = sub.size();
  std::size_t m = (b * f + k - 1) / k;
  std::vector<std::vector<Word>> out(m);
  std::vector<std::size_t> seen(b, 0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t p = j * k; p < j * k + k; ++p) {
      Letter a = static_cast<Letter>(p % b);
      const auto& below = sub[std::min(seen[a]++, f - 1)];
      for (const auto& w : below) out[j].push_back(Word{a}.concat(w));
    }
  }
  return out;
}

}  // namespace

std::pair<std::size_t, CoverWitness> min_cover(std::size_t b, std::size_t k, std::size_t d) {
  if (k < 2 || k >= b) throw std::invalid_argument("min_cover needs 2 <= k < b");
  if (d < 1) throw std::invalid_argument("min_cover needs d >= 1");
  double size = 1;
  for (std::size_t i = 0; i < d; ++i) size *= static_cast<double>(b);
  if (size > static_cast<double>(kCoverGuard))
    throw SizeGuard("b^d = " + std::to_string(static_cast<long long>(size)) + " exceeds the exact-search guard " +
                    std::to_string(kCoverGuard));
  CoverWitness w{b, k, d, {}, {}};
  for (const auto& set : cover_sets(b, k, d)) {
    w.trees.push_back(FiniteTree::closure_of(set, static_cast<Letter>(b), d));
    w.covered.insert(set.begin(), set.end());
  }
  return {w.trees.size(), std::move(w)};
}

std::optional<std::string> verify_cover(const CoverWitness& w) {
  std::set<Word> uni;
  for (std::size_t i = 0; i < w.trees.size(); ++i) {
    const auto& t = w.trees[i];
    std::string at = "tree " + std::to_string(i) + ": ";
    if (t.depth() != w.d) return at + "depth " + std::to_string(t.depth()) + ", expected " + std::to_string(w.d);
    if (auto v = is_k_branching_to_depth(t, w.k, w.d)) return at + v->describe();
    for (const auto& x : t.level(w.d)) {
      if (!x.empty() && x.max_entry() >= w.b) return at + "word " + x.pretty() + " leaves the alphabet";
      uni.insert(x);
    }
  }
  for (const auto& x : w.covered)
    if (!uni.count(x)) return "covered word " + x.pretty() + " is in no tree";
  for (const auto& x : uni)
    if (!w.covered.count(x)) return "word " + x.pretty() + " is missing from the covered set";
  Word x = zeros(w.d);
  while (true) {
    if (!uni.count(x)) return "uncovered word " + x.pretty();
    std::size_t i = w.d;
    std::vector<Letter> e(x.begin(), x.end());
    while (i > 0 && e[i - 1] + 1 == w.b) e[--i] = 0;
    if (i == 0) break;
    ++e[i - 1];
    x = Word(std::move(e));
  }
  return std::nullopt;
}

std::vector<CoverRow> monotonicity_table(std::size_t b, std::size_t d, const std::vector<std::size_t>& ks) {
  std::vector<CoverRow> rows;
  for (auto k : ks) {
    auto [v, w] = min_cover(b, k, d);
    rows.push_back({k, v, std::move(w)});
  }
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].k > rows[i - 1].k && rows[i].value > rows[i - 1].value)
      throw std::logic_error("cover value increases from k=" + std::to_string(rows[i - 1].k) + " to k=" +
                             std::to_string(rows[i].k));
  return rows;
}

std::string format_cover_table(std::size_t b, std::size_t d, const std::vector<CoverRow>& rows) {
  std::ostringstream os;
  os << "# finite localization numbers (artifact scaling): least k-branching cover of b^d\n";
  os << std::setw(4) << "b" << std::setw(4) << "d" << std::setw(4) << "k" << std::setw(8) << "value" << "\n";
  for (const auto& r : rows)
    os << std::setw(4) << b << std::setw(4) << d << std::setw(4) << r.k << std::setw(8) << r.value << "\n";
  return os.str();
}

ordered_json cover_to_json(const CoverWitness& w) {
  ordered_json j{{"b", w.b}, {"k", w.k}, {"d", w.d}, {"value", w.trees.size()}};
  j["trees"] = ordered_json::array();
  for (const auto& t : w.trees) j["trees"].push_back(write_tree(t));
  j["covered"] = ordered_json::array();
  for (const auto& x : w.covered) j["covered"].push_back(word_to_json(x));
  return j;
}

CoverWitness cover_from_json(const ordered_json& j) {
  CoverWitness w;
  w.b = j.at("b").get<std::size_t>();
  w.k = j.at("k").get<std::size_t>();
  w.d = j.at("d").get<std::size_t>();
  for (const auto& t : j.at("trees")) w.trees.push_back(read_tree(t.get<std::string>()));
  for (const auto& x : j.at("covered")) w.covered.insert(word_from_json(x));
  return w;
}

}  // namespace surv
