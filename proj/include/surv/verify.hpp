#pragma once

#include <string>
#include <vector>

#include "surv/record.hpp"

namespace surv {

struct VerifyReport {
  std::vector<std::string> defects;
  std::size_t certificates_checked = 0;
  std::size_t branches_checked = 0;

  bool ok() const { return defects.empty(); }
};

// Re-checks a record from its serialized form: digest, structure, every
// certificate against the rebuilt family, the final tree's shape and labels.
VerifyReport verify_record(const ordered_json& doc);
VerifyReport verify_record_text(const std::string& text);

}  // namespace surv
