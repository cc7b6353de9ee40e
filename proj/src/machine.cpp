#include "surv/machine.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace surv {

std::int64_t AdversarySpec::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw FamilyError("adversary " + std::to_string(id) + " is missing parameter '" + name + "'");
  return it->second;
}

TriState contains(const StagedTree& t, const Word& w, std::size_t stage) { return t.decide(w, stage); }

std::size_t pair_code(std::size_t e, std::size_t k) {
  if (k <= 2) throw std::invalid_argument("pairing is defined only for k > 2");
  std::size_t b = k - 3;
  return (e + b) * (e + b + 1) / 2 + b;
}

std::pair<std::size_t, std::size_t> unpair_code(std::size_t n) {
  std::size_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  std::size_t b = n - w * (w + 1) / 2;
  return {w - b, b + 3};
}

const StagedTree* AdversaryFamily::tree_by_id(std::size_t id) const {
  for (const auto& t : trees)
    if (t.id() == id) return &t;
  return nullptr;
}

const OracleFunctional* AdversaryFamily::functional_by_id(std::size_t id) const {
  for (const auto& f : functionals)
    if (f.id() == id) return &f;
  return nullptr;
}

std::vector<AdversarySpec> AdversaryFamily::specs() const {
  std::vector<AdversarySpec> out;
  for (const auto& t : trees) out.push_back(t.spec());
  for (const auto& f : functionals) out.push_back(f.spec());
  return out;
}

namespace {

const std::map<std::string, std::vector<std::string>>& tree_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"full_ary", {"b"}},
      {"full_range", {"lo", "hi"}},
      {"comb", {}},
      {"delayed_full_ary", {"b", "threshold"}},
      {"dishonest", {"k", "root_width"}},
  };
  return kinds;
}

const std::map<std::string, std::vector<std::string>>& functional_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"identity", {}},       {"constant", {"value"}},     {"mod", {"m"}},
      {"diverge", {}},        {"slow_identity", {"cost"}}, {"first_entry", {}},
  };
  return kinds;
}

void check_params(const AdversarySpec& spec, const std::vector<std::string>& expected) {
  for (const auto& name : expected) {
    auto it = spec.params.find(name);
    if (it == spec.params.end()) throw FamilyError("missing parameter '" + name + "'");
    if (it->second < 0) throw FamilyError("parameter '" + name + "' must be non-negative");
  }
  for (const auto& [name, value] : spec.params)
    if (std::find(expected.begin(), expected.end(), name) == expected.end())
      throw FamilyError("unknown parameter '" + name + "' for kind '" + spec.kind + "'");
}

StagedTree::Decider predicate_decider(std::function<bool(const Word&)> member) {
  return [member = std::move(member)](const Word& w, std::size_t) {
    return member(w) ? TriState::In : TriState::Out;
  };
}

bool all_below(const Word& w, std::int64_t b) {
  return std::all_of(w.begin(), w.end(), [b](Letter x) { return static_cast<std::int64_t>(x) < b; });
}

}  // namespace

bool is_tree_kind(const std::string& kind) { return tree_kinds().count(kind) != 0; }
bool is_functional_kind(const std::string& kind) { return functional_kinds().count(kind) != 0; }

StagedTree make_staged_tree(const AdversarySpec& spec) {
  auto it = tree_kinds().find(spec.kind);
  if (it == tree_kinds().end()) throw FamilyError("unknown staged-tree kind '" + spec.kind + "'");
  check_params(spec, it->second);
  if (spec.kind == "full_ary") {
    std::int64_t b = spec.param("b");
    return StagedTree(spec, predicate_decider([b](const Word& w) { return all_below(w, b); }));
  }
  if (spec.kind == "full_range") {
    std::int64_t lo = spec.param("lo"), hi = spec.param("hi");
    return StagedTree(spec, predicate_decider([lo, hi](const Word& w) {
                        return std::all_of(w.begin(), w.end(), [&](Letter x) {
                          return static_cast<std::int64_t>(x) >= lo && static_cast<std::int64_t>(x) < hi;
                        });
                      }));
  }
  if (spec.kind == "comb") return StagedTree(spec, predicate_decider([](const Word& w) { return all_below(w, 1); }));
  if (spec.kind == "delayed_full_ary") {
    std::int64_t b = spec.param("b");
    auto threshold = static_cast<std::size_t>(spec.param("threshold"));
    return StagedTree(spec, [b, threshold](const Word& w, std::size_t stage) {
      if (stage < threshold) return TriState::Undecided;
      return all_below(w, b) ? TriState::In : TriState::Out;
    });
  }
  // dishonest: a k-branching claim that the root contradicts with root_width children.
  std::int64_t k = spec.param("k"), width = spec.param("root_width");
  return StagedTree(spec, predicate_decider([k, width](const Word& w) {
                      if (w.empty()) return true;
                      if (static_cast<std::int64_t>(w[0]) >= width) return false;
                      return std::all_of(w.begin() + 1, w.end(),
                                         [k](Letter x) { return static_cast<std::int64_t>(x) < k; });
                    }));
}

OracleFunctional make_functional(const AdversarySpec& spec) {
  auto it = functional_kinds().find(spec.kind);
  if (it == functional_kinds().end()) throw FamilyError("unknown functional kind '" + spec.kind + "'");
  check_params(spec, it->second);
  using R = std::optional<Letter>;
  if (spec.kind == "identity")
    return OracleFunctional(spec, [](const Word& s, std::size_t n, std::size_t fuel) -> R {
      if (n < s.size() && fuel > n) return s[n];
      return std::nullopt;
    });
  if (spec.kind == "constant") {
    auto value = static_cast<Letter>(spec.param("value"));
    return OracleFunctional(spec, [value](const Word&, std::size_t, std::size_t fuel) -> R {
      if (fuel >= 1) return value;
      return std::nullopt;
    });
  }
  if (spec.kind == "mod") {
    auto m = static_cast<Letter>(spec.param("m"));
    if (m == 0) throw FamilyError("parameter 'm' must be positive");
    return OracleFunctional(spec, [m](const Word& s, std::size_t n, std::size_t fuel) -> R {
      if (n < s.size() && fuel > n) return s[n] % m;
      return std::nullopt;
    });
  }
  if (spec.kind == "diverge")
    return OracleFunctional(spec, [](const Word&, std::size_t, std::size_t) -> R { return std::nullopt; });
  if (spec.kind == "slow_identity") {
    auto cost = static_cast<std::size_t>(spec.param("cost"));
    return OracleFunctional(spec, [cost](const Word& s, std::size_t n, std::size_t fuel) -> R {
      if (n < s.size() && fuel >= cost * (n + 1) * (n + 1)) return s[n];
      return std::nullopt;
    });
  }
  // first_entry: phi^sigma(n) = sigma(0).
  return OracleFunctional(spec, [](const Word& s, std::size_t n, std::size_t fuel) -> R {
    if (!s.empty() && fuel > n) return s[0];
    return std::nullopt;
  });
}

AdversaryFamily build_family(const std::vector<AdversarySpec>& specs) {
  AdversaryFamily family;
  std::set<std::size_t> tree_ids, functional_ids;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    std::string where = "entry " + std::to_string(i) + " (id " + std::to_string(spec.id) + ")";
    try {
      if (is_tree_kind(spec.kind)) {
        if (!tree_ids.insert(spec.id).second) throw FamilyError("duplicate staged-tree id");
        family.trees.push_back(make_staged_tree(spec));
      } else if (is_functional_kind(spec.kind)) {
        if (spec.claim) throw FamilyError("functionals take no claimed shape");
        if (!functional_ids.insert(spec.id).second) throw FamilyError("duplicate functional id");
        family.functionals.push_back(make_functional(spec));
      } else {
        throw FamilyError("unknown kind '" + spec.kind + "'");
      }
    } catch (const FamilyError& e) {
      throw FamilyError(where + ": " + e.what());
    }
  }
  return family;
}

std::vector<AdversarySpec> standard_library_specs() {
  auto tree = [](std::size_t id, std::string kind, std::map<std::string, std::int64_t> params, ShapeKind shape,
                 std::size_t k) {
    return AdversarySpec{id, std::move(kind), std::move(params), Claim{shape, k}};
  };
  auto fn = [](std::size_t id, std::string kind, std::map<std::string, std::int64_t> params = {}) {
    return AdversarySpec{id, std::move(kind), std::move(params), std::nullopt};
  };
  return {
      tree(0, "full_ary", {{"b", 2}}, ShapeKind::KBranching, 2),
      tree(1, "comb", {}, ShapeKind::KBranching, 3),
      tree(2, "full_ary", {{"b", 3}}, ShapeKind::KBranching, 3),
      tree(3, "delayed_full_ary", {{"b", 2}, {"threshold", 12}}, ShapeKind::KBranching, 2),
      tree(4, "dishonest", {{"k", 2}, {"root_width", 3}}, ShapeKind::KBranching, 2),
      tree(5, "full_range", {{"lo", 1}, {"hi", 3}}, ShapeKind::KBranching, 2),
      fn(0, "identity"),
      fn(1, "constant", {{"value", 3}}),
      fn(2, "mod", {{"m", 3}}),
      fn(3, "diverge"),
      fn(4, "slow_identity", {{"cost", 4}}),
      fn(5, "first_entry"),
      fn(6, "constant", {{"value", 0}}),
  };
}

AdversaryFamily standard_library() { return build_family(standard_library_specs()); }

namespace {

ordered_json spec_to_json(const AdversarySpec& spec) {
  ordered_json entry;
  entry["id"] = spec.id;
  entry["kind"] = spec.kind;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : spec.params) params[k] = v;
  entry["params"] = params;
  if (spec.claim) {
    entry["claim"] = {{"shape", spec.claim->shape == ShapeKind::KTree ? "ktree" : "branching"},
                      {"k", spec.claim->k}};
  } else {
    entry["claim"] = nullptr;
  }
  return entry;
}

AdversarySpec spec_from_json(const ordered_json& entry, std::size_t index) {
  std::string where = "entry " + std::to_string(index);
  try {
    if (!entry.is_object()) throw FamilyError("expected an object");
    for (const auto& [key, value] : entry.items())
      if (key != "id" && key != "kind" && key != "params" && key != "claim")
        throw FamilyError("unknown field '" + key + "'");
    AdversarySpec spec;
    spec.id = entry.at("id").get<std::size_t>();
    where += " (id " + std::to_string(spec.id) + ")";
    spec.kind = entry.at("kind").get<std::string>();
    if (entry.contains("params"))
      for (const auto& [key, value] : entry.at("params").items()) spec.params[key] = value.get<std::int64_t>();
    if (entry.contains("claim") && !entry.at("claim").is_null()) {
      const auto& c = entry.at("claim");
      auto shape = c.at("shape").get<std::string>();
      if (shape != "ktree" && shape != "branching") throw FamilyError("unknown claimed shape '" + shape + "'");
      spec.claim = Claim{shape == "ktree" ? ShapeKind::KTree : ShapeKind::KBranching, c.at("k").get<std::size_t>()};
    }
    return spec;
  } catch (const FamilyError& e) {
    throw FamilyError(where + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw FamilyError(where + ": " + e.what());
  }
}

}  // namespace

ordered_json family_to_json(const AdversaryFamily& family) {
  ordered_json doc;
  doc["adversaries"] = ordered_json::array();
  for (const auto& spec : family.specs()) doc["adversaries"].push_back(spec_to_json(spec));
  return doc;
}

AdversaryFamily family_from_json(const ordered_json& doc) {
  if (!doc.is_object() || !doc.contains("adversaries") || !doc.at("adversaries").is_array())
    throw FamilyError("family document needs an 'adversaries' array");
  std::vector<AdversarySpec> specs;
  const auto& list = doc.at("adversaries");
  for (std::size_t i = 0; i < list.size(); ++i) specs.push_back(spec_from_json(list[i], i));
  return build_family(specs);
}

AdversaryFamily load_family(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FamilyError(std::string("family file is not valid JSON: ") + e.what());
  }
  return family_from_json(doc);
}

std::string to_string(Looks l) {
  switch (l) {
    case Looks::Yes: return "yes";
    case Looks::No: return "no";
    case Looks::Undecided: return "undecided";
  }
  return "?";
}

Looks looks_like_branching(const StagedTree& t, std::size_t k, const Word& root, std::size_t stage,
                           std::size_t window) {
  TriState r = t.decide(root, stage);
  if (r == TriState::Out) return Looks::No;
  if (r == TriState::Undecided) return Looks::Undecided;
  constexpr std::size_t kScanCap = 1u << 16;
  const std::size_t scan = std::min(stage, kScanCap);
  bool settled = true;
  std::deque<Word> queue{root};
  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    std::size_t in = 0, undecided = stage > kScanCap ? 1 : 0;
    std::vector<Word> in_children;
    for (Letter i = 0; i < scan; ++i) {
      Word c = w.child(i);
      switch (t.decide(c, stage)) {
        case TriState::In: ++in; in_children.push_back(std::move(c)); break;
        case TriState::Undecided: ++undecided; break;
        case TriState::Out: break;
      }
    }
    if (in > k) return Looks::No;
    if (undecided == 0 && in != 1 && in != k) settled = false;
    if (w == root && undecided > 0) settled = false;
    if (w.size() < root.size() + window)
      for (auto& c : in_children) queue.push_back(std::move(c));
  }
  return settled ? Looks::Yes : Looks::Undecided;
}

std::optional<Word> eval_total_on(const OracleFunctional& f, const Word& sigma, std::size_t upto, std::size_t fuel) {
  Word out;
  for (std::size_t n = 0; n < upto; ++n) {
    auto v = f.eval(sigma, n, fuel);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

std::size_t converged_length(const OracleFunctional& f, const Word& sigma, std::size_t fuel, std::size_t cap) {
  std::size_t m = 0;
  while (m < cap && f.eval(sigma, m, fuel)) ++m;
  return m;
}

Word converged_output(const OracleFunctional& f, const Word& sigma, std::size_t fuel, std::size_t cap) {
  Word out;
  for (std::size_t n = 0; n < cap; ++n) {
    auto v = f.eval(sigma, n, fuel);
    if (!v) break;
    out.push_back(*v);
  }
  return out;
}

StagedTree pushforward_preimage(const StagedTree& t, const Surjection& g) {
  auto base = t;
  return StagedTree(t.spec(), [base, g](const Word& w, std::size_t stage) {
    if (!w.empty() && w.max_entry() >= g.domain_size()) return TriState::Out;
    return base.decide(map_path(g, w), stage);
  });
}

}  // namespace surv
