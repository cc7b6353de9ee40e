#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "surv/machine.hpp"
#include "surv/record.hpp"
#include "surv/tree.hpp"

namespace surv {

// Raised inside an engine when a stage cannot finish; engines catch it, mark
// the record incomplete and stop.
class FuelExhausted : public std::runtime_error {
public:
  explicit FuelExhausted(std::size_t stage, const std::string& detail)
      : std::runtime_error("FuelExhausted(stage " + std::to_string(stage) + "): " + detail), stage_(stage) {}
  std::size_t stage() const { return stage_; }

private:
  std::size_t stage_;
};

class ScheduleUnrepairable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CandidateShortage : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// R- and P-stages alternate: stage 2i handles staged tree i, stage 2i+1 functional i.
RunRecord diagonalize_surviving(std::size_t k, const AdversaryFamily& family, std::size_t stages, std::size_t depth,
                                std::size_t fuel);

// Level n of the 3-tree serves the pair <e,k> decoded from level_code(n);
// nullopt leaves the level idle.
using LevelCode = std::function<std::optional<std::pair<std::size_t, std::size_t>>(std::size_t)>;
LevelCode pairing_level_code();

struct Build3Result {
  FiniteTree tree;
  Word rightmost;
  RunRecord record;
};

Build3Result build_3tree(const AdversaryFamily& family, std::size_t depth, std::size_t stages,
                         const LevelCode& code = pairing_level_code());
std::size_t default_build3_stages(std::size_t depth);

// 1,1,2,1,2,3,1,2,3,4,...
std::vector<std::size_t> schedule_prefix(std::size_t n);

// The r-th pair <e,k> (r > 0) served by schedule label r: the family's staged
// trees first, in list order, with k = max(claimed k, 3); then every other pair
// in pairing order.
std::pair<std::size_t, std::size_t> schedule_pair(std::size_t r, const AdversaryFamily& family);

struct LabeledCondition {
  Word stem;
  FiniteTree tree;
  Labels labels;
};

// The build_3tree tree with level i labeled by schedule term r_i; level i serves
// schedule_pair(r_i).
LabeledCondition traceable_start(const AdversaryFamily& family, std::size_t depth, std::size_t stages);
// The full ternary tree of the given depth, labeled the same way.
LabeledCondition traceable_full_start(std::size_t depth);
// Violations of the label invariants, empty when all hold. `initial` demands the
// nonzero label sequence on each branch be an initial segment of the schedule
// rather than any contiguous segment of it.
std::vector<std::string> label_defects(const LabeledCondition& c, bool initial);

RunRecord traceable_prune(const LabeledCondition& start, const AdversaryFamily& family, std::size_t stages,
                          std::size_t depth, std::size_t fuel);

// Width of the implicit start tree (entries below it), the number of least
// children explored per node in extension searches, and the node budget of the
// output-at-least-3 search.
inline constexpr std::size_t kAcceleratingWidth = 243;
inline constexpr std::size_t kProbeWidth = 3;
inline constexpr std::size_t kSearchBudget = 20000;

// Canonical finite accelerating tree above `root`: splits of 3, 4 and 5 children
// on the first three levels, then all-zero paths to `depth`.
FiniteTree accelerating_skeleton(const Word& root, std::size_t depth);

RunRecord accelerating_force(const AdversaryFamily& family, std::size_t stages, std::size_t depth, std::size_t fuel);

}  // namespace surv
