#include "surv/record.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "surv/tree_io.hpp"

namespace surv {

ordered_json word_to_json(const Word& w) {
  ordered_json out = ordered_json::array();
  for (Letter x : w) out.push_back(x);
  return out;
}

Word word_from_json(const ordered_json& j) {
  if (!j.is_array()) throw RecordError("expected a word array");
  std::vector<Letter> entries;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw RecordError("word entries must be naturals");
    entries.push_back(x.get<Letter>());
  }
  return Word(std::move(entries));
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw RecordError("SHA-256 computation failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

std::string compute_digest(const ordered_json& doc) {
  ordered_json copy = doc;
  copy.erase("digest");
  return sha256_hex(copy.dump());
}

void reseal(ordered_json& doc) { doc["digest"] = compute_digest(doc); }

ordered_json record_to_json(const RunRecord& r) {
  ordered_json doc;
  doc["engine"] = r.engine;
  doc["parameters"] = r.parameters;
  doc["family"] = r.family;
  doc["stages"] = ordered_json::array();
  for (const auto& s : r.stages) {
    ordered_json e;
    e["index"] = s.index;
    e["requirement"] = s.requirement;
    e["case"] = s.case_taken;
    e["witnesses"] = s.witnesses;
    e["evaluations"] = s.evaluations;
    e["certificates"] = s.certificates;
    doc["stages"].push_back(e);
  }
  doc["complete"] = r.complete;
  doc["error"] = r.error;
  doc["final_stem"] = word_to_json(r.final_stem);
  doc["final_tree"] = write_tree(r.final_tree);
  if (r.labels) {
    ordered_json labels = ordered_json::array();
    std::vector<std::pair<Word, std::size_t>> sorted(r.labels->begin(), r.labels->end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return ShortLex{}(a.first, b.first); });
    for (const auto& [w, g] : sorted) labels.push_back({word_to_json(w), g});
    doc["labels"] = labels;
  } else {
    doc["labels"] = nullptr;
  }
  doc["traces"] = ordered_json::array();
  for (const auto& t : r.traces) doc["traces"].push_back(write_trace(t));
  doc["certificates"] = ordered_json::array();
  for (const auto& c : r.certificates) doc["certificates"].push_back({{"kind", c.kind}, {"data", c.data}});
  reseal(doc);
  return doc;
}

std::string serialize_record(const RunRecord& r) { return record_to_json(r).dump(2) + "\n"; }

RunRecord record_from_json(const ordered_json& doc) {
  try {
    RunRecord r;
    r.engine = doc.at("engine").get<std::string>();
    r.parameters = doc.at("parameters");
    r.family = doc.at("family");
    for (const auto& e : doc.at("stages")) {
      StageEntry s;
      s.index = e.at("index").get<std::size_t>();
      s.requirement = e.at("requirement").get<std::string>();
      s.case_taken = e.at("case").get<std::string>();
      s.witnesses = e.at("witnesses");
      s.evaluations = e.at("evaluations").get<std::size_t>();
      s.certificates = e.at("certificates").get<std::vector<std::size_t>>();
      r.stages.push_back(std::move(s));
    }
    r.complete = doc.at("complete").get<bool>();
    r.error = doc.at("error").get<std::string>();
    r.final_stem = word_from_json(doc.at("final_stem"));
    r.final_tree = read_tree(doc.at("final_tree").get<std::string>());
    if (!doc.at("labels").is_null()) {
      Labels labels;
      for (const auto& entry : doc.at("labels")) {
        if (!entry.is_array() || entry.size() != 2) throw RecordError("label entries are [word, value] pairs");
        if (!labels.emplace(word_from_json(entry[0]), entry[1].get<std::size_t>()).second)
          throw RecordError("duplicate label entry");
      }
      r.labels = std::move(labels);
    }
    for (const auto& t : doc.at("traces")) r.traces.push_back(read_trace(t.get<std::string>()));
    for (const auto& c : doc.at("certificates")) {
      if (!c.at("data").is_object()) throw RecordError("certificate data must be an object");
      r.certificates.push_back({c.at("kind").get<std::string>(), c.at("data")});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw RecordError(std::string("malformed record: ") + e.what());
  } catch (const ParseError& e) {
    throw RecordError(std::string("malformed embedded text: ") + e.what());
  }
}

}  // namespace surv
