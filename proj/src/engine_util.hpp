#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "surv/engines.hpp"

namespace surv::detail {

// Memoized fuel-bounded evaluation of one functional on tree nodes.
class NodeEvaluator {
public:
  struct Info {
    std::uint64_t mask = 0;  // bit n set iff position n converges
    std::size_t conv = 0;    // length of the converged initial segment
    Word out;                // outputs on [0, conv)
    std::vector<std::optional<Letter>> values;
  };

  NodeEvaluator(const OracleFunctional& f, std::size_t fuel, std::size_t cap) : f_(f), fuel_(fuel), cap_(cap) {}

  const Info& at(const Word& w);
  std::size_t evaluations() const { return evaluations_; }
  std::size_t cap() const { return cap_; }
  std::size_t fuel() const { return fuel_; }
  std::uint64_t full_mask() const { return cap_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cap_) - 1; }

private:
  const OracleFunctional& f_;
  std::size_t fuel_, cap_;
  std::size_t evaluations_ = 0;
  std::map<Word, Info> memo_;
};

// Follows unique children from `w`; returns the first node with two or more
// children, or nullopt when a childless node is reached first.
std::optional<Word> first_split_above(const FiniteTree& t, const Word& w);
// Childless members extending `w`, shortlex order.
std::vector<Word> maximal_above(const FiniteTree& t, const Word& w);
// Prefix closure of `leaves` with the alphabet and depth of `base`.
FiniteTree closure_like(const FiniteTree& base, const std::vector<Word>& leaves);
// OR of leaf convergence masks for every node above `root`.
std::map<Word, std::uint64_t> reach_masks(const FiniteTree& t, const Word& root, NodeEvaluator& ev);
// Least node (shortlex) above `root` missing some position, with that position.
std::optional<std::pair<Word, std::size_t>> totality_escape(const FiniteTree& t, const Word& root, NodeEvaluator& ev);

// Trace whose words are the length-`length` prefixes of `outputs` and their prefixes.
TraceTable trace_of_outputs(const std::vector<Word>& outputs, std::size_t length, LevelBound bound);

ordered_json stage_params(std::size_t stages, std::size_t depth, std::size_t fuel);

}  // namespace surv::detail
