#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "surv/tree.hpp"
#include "surv/word.hpp"

namespace surv {

using ordered_json = nlohmann::ordered_json;

class FamilyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ShapeKind { KTree, KBranching };

struct Claim {
  ShapeKind shape = ShapeKind::KBranching;
  std::size_t k = 2;
  friend bool operator==(const Claim&, const Claim&) = default;
};

// One entry of an adversary configuration: enough to rebuild the oracle.
struct AdversarySpec {
  std::size_t id = 0;
  std::string kind;
  std::map<std::string, std::int64_t> params;
  std::optional<Claim> claim;

  std::int64_t param(const std::string& name) const;
  friend bool operator==(const AdversarySpec&, const AdversarySpec&) = default;
};

// Staged membership oracle for "the e-th computable tree".
//
// Decisions are monotone in the stage, In-words have In-prefixes, and any word
// with an entry >= stage or length >= stage is Undecided at that stage.
class StagedTree {
public:
  using Decider = std::function<TriState(const Word&, std::size_t)>;

  StagedTree(AdversarySpec spec, Decider inner) : spec_(std::move(spec)), inner_(std::move(inner)) {}

  std::size_t id() const { return spec_.id; }
  const std::optional<Claim>& claim() const { return spec_.claim; }
  const AdversarySpec& spec() const { return spec_; }

  TriState decide(const Word& w, std::size_t stage) const {
    if (w.size() >= stage || (!w.empty() && w.max_entry() >= stage)) return TriState::Undecided;
    return inner_(w, stage);
  }

private:
  AdversarySpec spec_;
  Decider inner_;
};

TriState contains(const StagedTree& t, const Word& w, std::size_t stage);

// Fuel-bounded model of phi_e^sigma(n). Fuel- and use-monotone, deterministic.
class OracleFunctional {
public:
  using Evaluator = std::function<std::optional<Letter>(const Word&, std::size_t, std::size_t)>;

  OracleFunctional(AdversarySpec spec, Evaluator eval) : spec_(std::move(spec)), eval_(std::move(eval)) {}

  std::size_t id() const { return spec_.id; }
  const AdversarySpec& spec() const { return spec_; }

  // nullopt means NotYet: no convergence within `fuel`.
  std::optional<Letter> eval(const Word& oracle_prefix, std::size_t n, std::size_t fuel) const {
    return eval_(oracle_prefix, n, fuel);
  }

private:
  AdversarySpec spec_;
  Evaluator eval_;
};

// Naturals onto pairs <e,k> with k > 2 (Cantor pairing of e and k-3).
std::size_t pair_code(std::size_t e, std::size_t k);
std::pair<std::size_t, std::size_t> unpair_code(std::size_t n);

struct AdversaryFamily {
  std::vector<StagedTree> trees;
  std::vector<OracleFunctional> functionals;

  const StagedTree* tree_by_id(std::size_t id) const;
  const OracleFunctional* functional_by_id(std::size_t id) const;
  std::vector<AdversarySpec> specs() const;
};

bool is_tree_kind(const std::string& kind);
bool is_functional_kind(const std::string& kind);
StagedTree make_staged_tree(const AdversarySpec& spec);
OracleFunctional make_functional(const AdversarySpec& spec);

// Builds a family from specs; rejects unknown kinds, bad parameters and duplicate ids.
AdversaryFamily build_family(const std::vector<AdversarySpec>& specs);
AdversaryFamily standard_library();
std::vector<AdversarySpec> standard_library_specs();

ordered_json family_to_json(const AdversaryFamily& family);
AdversaryFamily family_from_json(const ordered_json& doc);
AdversaryFamily load_family(const std::string& text);

enum class Looks { Yes, No, Undecided };
std::string to_string(Looks l);

// Whether the stage-s decisions of `t` are consistent with a k-branching tree
// containing `root`. In-nodes up to `window` levels above root are inspected.
Looks looks_like_branching(const StagedTree& t, std::size_t k, const Word& root, std::size_t stage,
                           std::size_t window = 3);

// Output word of length `upto` if every position converges within fuel.
std::optional<Word> eval_total_on(const OracleFunctional& f, const Word& sigma, std::size_t upto,
                                  std::size_t fuel);
// Largest m <= cap with phi^sigma converging on [0, m).
std::size_t converged_length(const OracleFunctional& f, const Word& sigma, std::size_t fuel, std::size_t cap);
// phi^sigma restricted to its converged prefix (at most cap).
Word converged_output(const OracleFunctional& f, const Word& sigma, std::size_t fuel, std::size_t cap);

StagedTree pushforward_preimage(const StagedTree& t, const Surjection& g);

}  // namespace surv
