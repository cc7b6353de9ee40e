#include <doctest.h>

#include "mutations.hpp"
#include "support.hpp"
#include "surv/verify.hpp"

using namespace surv;
using namespace surv::testing;

namespace {

const std::map<std::string, std::string>& golden_texts() {
  static const auto texts = [] {
    std::map<std::string, std::string> out;
    for (const auto& g : golden_suite()) out[g.name] = serialize_record(g.run());
    return out;
  }();
  return texts;
}

std::string defects_of(const VerifyReport& r) {
  std::string s;
  for (const auto& d : r.defects) s += d + "\n";
  return s;
}

}  // namespace

TEST_CASE("golden records verify and reproduce byte for byte") {
  for (const auto& g : golden_suite()) {
    CAPTURE(g.name);
    const auto& text = golden_texts().at(g.name);
    auto rep = verify_record_text(text);
    CHECK_MESSAGE(rep.ok(), defects_of(rep));
    CHECK(rep.certificates_checked > 0);
    CHECK(serialize_record(g.run()) == text);
  }
}

TEST_CASE("every catalogued mutation is rejected") {
  auto cat = mutation_catalogue();
  CHECK(cat.size() == 20);
  for (const auto& m : cat) {
    CAPTURE(m.name);
    auto doc = ordered_json::parse(golden_texts().at(m.golden));
    auto before = doc;
    m.apply(doc);
    REQUIRE(doc != before);
    if (m.reseal) reseal(doc);
    auto rep = verify_record(doc);
    CHECK_FALSE(rep.ok());
  }
}

TEST_CASE("single-byte edits that change the parsed record are rejected") {
  const auto& text = golden_texts().at("build3-d8");
  auto original = ordered_json::parse(text);
  Rng rng(29);
  std::size_t changed = 0;
  for (int i = 0; i < 400; ++i) {
    auto t = text;
    std::size_t pos = pick(rng, 0, t.size() - 1);
    const std::string alphabet = "0123456789abcdef[]{},:\" \nxyz";
    t[pos] = alphabet[pick(rng, 0, alphabet.size() - 1)];
    ordered_json doc;
    try {
      doc = ordered_json::parse(t);
    } catch (const nlohmann::json::exception&) {
      CHECK_FALSE(verify_record_text(t).ok());
      continue;
    }
    if (doc == original) continue;
    ++changed;
    CHECK_FALSE(verify_record_text(t).ok());
  }
  CHECK(changed > 100);
}

TEST_CASE("verify reports malformed input as defects") {
  CHECK_FALSE(verify_record_text("").ok());
  CHECK_FALSE(verify_record_text("{}").ok());
  CHECK_FALSE(verify_record_text("[1,2]").ok());
  auto doc = ordered_json::parse(golden_texts().at("surviving-d6"));
  doc.erase("digest");
  CHECK_FALSE(verify_record(doc).ok());
}
