#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surv/machine.hpp"
#include "surv/tree.hpp"

namespace surv {

class SizeGuard : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kCoverGuard = 729;  // 3^6

struct CoverWitness {
  std::size_t b = 0, k = 0, d = 0;
  std::vector<FiniteTree> trees;
  std::set<Word> covered;
};

// Least number of k-branching subtrees of b^{<=d} covering b^d, with a witness.
std::pair<std::size_t, CoverWitness> min_cover(std::size_t b, std::size_t k, std::size_t d);

// Empty when both witness invariants hold; otherwise names the first defect.
std::optional<std::string> verify_cover(const CoverWitness& w);

struct CoverRow {
  std::size_t k = 0, value = 0;
  CoverWitness witness;
};

// Throws std::logic_error if the values increase in k.
std::vector<CoverRow> monotonicity_table(std::size_t b, std::size_t d, const std::vector<std::size_t>& ks);
std::string format_cover_table(std::size_t b, std::size_t d, const std::vector<CoverRow>& rows);

ordered_json cover_to_json(const CoverWitness& w);
CoverWitness cover_from_json(const ordered_json& j);

}  // namespace surv
