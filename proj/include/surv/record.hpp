#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surv/machine.hpp"
#include "surv/trace.hpp"
#include "surv/tree.hpp"

namespace surv {

class RecordError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A checkable claim. `kind` is one of:
//   avoid               adversary `tree` answers Out on `node` at `stage`
//   not_k_tree          `node` has more than k In-children in adversary `tree` at `stage`
//   presumed_divergent  functional `functional` fails at position `n` on every probe leaf above `node` at `fuel`
//   trace               every branch of the final tree above `node` maps through trace `trace`
//   output_ge3          functional converges to a value >= 3 at `n` on `node`
//   constant            converged outputs agree position by position on all probe leaves above `node`
//   unmet               the requirement could not be acted on; `reason` says why
// The probe is the final tree, or accelerating_skeleton(probe_root, depth) when
// `probe` is "skeleton".
struct Certificate {
  std::string kind;
  ordered_json data = ordered_json::object();
};

struct StageEntry {
  std::size_t index = 0;
  std::string requirement;
  std::string case_taken;
  ordered_json witnesses = ordered_json::object();
  std::size_t evaluations = 0;
  std::vector<std::size_t> certificates;
};

using Labels = std::map<Word, std::size_t>;

struct RunRecord {
  std::string engine;
  ordered_json parameters = ordered_json::object();
  ordered_json family = ordered_json::object();
  std::vector<StageEntry> stages;
  bool complete = true;
  std::string error;
  Word final_stem;
  FiniteTree final_tree;
  std::optional<Labels> labels;
  std::vector<TraceTable> traces;
  std::vector<Certificate> certificates;

  std::size_t add_certificate(Certificate c) {
    certificates.push_back(std::move(c));
    return certificates.size() - 1;
  }
};

ordered_json word_to_json(const Word& w);
Word word_from_json(const ordered_json& j);

// Serialized form with a trailing "digest" field (SHA-256 over the rest).
ordered_json record_to_json(const RunRecord& r);
std::string serialize_record(const RunRecord& r);
// Parses without checking the digest.
RunRecord record_from_json(const ordered_json& doc);

std::string sha256_hex(const std::string& data);
// Digest of `doc` with its "digest" field removed.
std::string compute_digest(const ordered_json& doc);
// Recomputes and stores the digest field.
void reseal(ordered_json& doc);

}  // namespace surv
