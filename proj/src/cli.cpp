#include "surv/cli.hpp"

#include <CLI11.hpp>

#include "surv/cover.hpp"
#include "surv/engines.hpp"
#include "surv/record.hpp"
#include "surv/tree_io.hpp"
#include "surv/verify.hpp"

namespace surv {

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

AdversaryFamily family_arg(const std::string& f) {
  if (f == "library") return standard_library();
  if (f == "empty") return AdversaryFamily{};
  return load_family(read_file(f));
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_file(path, text);
}

struct Options {
  std::string pred, tree_file, g_file, out_file, engine, family = "library", record_file, tree_out, input,
      start = "build3";
  std::size_t k = 2, b = 3, stages = 0, fuel = 10000, trace = 0;
  std::optional<std::size_t> d, depth;
  bool dot = false, table = false;
};

int check_tree(const Options& o, std::ostream& out, std::ostream& err) {
  FiniteTree t = read_tree(read_file(o.tree_file));
  std::size_t d = o.d.value_or(t.depth());
  ShapeCheck v;
  if (o.pred == "ktree") v = is_k_tree_to_depth(t, o.k, d);
  else if (o.pred == "kbranching") v = is_k_branching_to_depth(t, o.k, d);
  else v = is_accelerating_to_depth(t, d);
  if (v) {
    err << "defect: node " << v->node.pretty() << ": " << v->describe() << "\n";
    return kExitDefect;
  }
  out << "ok\n";
  return kExitOk;
}

int pushforward(const Options& o, std::ostream& out) {
  FiniteTree t = read_tree(read_file(o.tree_file));
  Surjection g = read_surjection(read_file(o.g_file));
  emit(o.out_file, write_tree(pushforward_preimage(t, g)), out);
  return kExitOk;
}

int min_cover_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  std::size_t d = o.d.value_or(1);
  if (o.table) {
    std::vector<std::size_t> ks;
    for (std::size_t k = 2; k < o.b; ++k) ks.push_back(k);
    auto rows = monotonicity_table(o.b, d, ks);
    for (const auto& r : rows)
      if (auto bad = verify_cover(r.witness)) {
        err << "defect: k=" << r.k << ": " << *bad << "\n";
        return kExitDefect;
      }
    out << format_cover_table(o.b, d, rows);
    return kExitOk;
  }
  auto [v, w] = min_cover(o.b, o.k, d);
  if (auto bad = verify_cover(w)) {
    err << "defect: " << *bad << "\n";
    return kExitDefect;
  }
  out << v << "\n";
  write_file(o.out_file.empty() ? "cover_witness.json" : o.out_file, cover_to_json(w).dump(2) + "\n");
  return kExitOk;
}

int run_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  AdversaryFamily fam = family_arg(o.family);
  std::size_t depth = o.depth.value_or(8);
  std::size_t pairs = 2 * std::max(fam.trees.size(), fam.functionals.size());
  std::size_t stages = o.stages ? o.stages : pairs;
  RunRecord rec;
  if (o.engine == "surviving") {
    rec = diagonalize_surviving(o.k, fam, stages, depth, o.fuel);
  } else if (o.engine == "build3") {
    rec = build_3tree(fam, depth, o.stages ? o.stages : default_build3_stages(depth)).record;
  } else if (o.engine == "traceable") {
    auto begin = o.start == "full" ? traceable_full_start(depth) : traceable_start(fam, depth, default_build3_stages(depth));
    rec = traceable_prune(begin, fam, stages, depth, o.fuel);
    rec.parameters["start"] = o.start;
  } else {
    rec = accelerating_force(fam, stages, depth, o.fuel);
  }
  emit(o.out_file, serialize_record(rec), out);
  if (!o.tree_out.empty()) write_file(o.tree_out, write_tree(rec.final_tree));
  if (!rec.complete) {
    err << "budget: " << rec.error << "\n";
    return kExitBudget;
  }
  return kExitOk;
}

int verify_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  auto rep = verify_record_text(read_file(o.record_file));
  for (const auto& d : rep.defects) err << "defect: " << d << "\n";
  if (!rep.ok()) return kExitDefect;
  out << "ok: " << rep.certificates_checked << " certificates, " << rep.branches_checked << " branches\n";
  return kExitOk;
}

int emit_cmd(const Options& o, std::ostream& out) {
  std::string text = read_file(o.input);
  auto first = text.find_first_not_of(" \t\r\n");
  FiniteTree t;
  std::string body;
  if (first != std::string::npos && text[first] == '{') {
    RunRecord rec = record_from_json(ordered_json::parse(text));
    if (o.trace) {
      if (o.trace > rec.traces.size())
        throw UsageError("record has " + std::to_string(rec.traces.size()) + " traces");
      const auto& tr = rec.traces[o.trace - 1];
      t = tr.as_tree();
      body = write_trace(tr);
    } else {
      t = rec.final_tree;
      body = write_tree(t);
    }
  } else if (first != std::string::npos && text.compare(first, 5, "trace") == 0) {
    auto tr = read_trace(text);
    t = tr.as_tree();
    body = write_trace(tr);
  } else {
    t = read_tree(text);
    body = write_tree(t);
  }
  emit(o.out_file, o.dot ? to_dot(t) : body, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"surv: finite tree, trace and forcing constructions"};
  app.require_subcommand(1);
  Options o;

  auto* ct = app.add_subcommand("check-tree", "validate a tree file against a shape predicate");
  ct->add_option("tree", o.tree_file, "tree file")->required();
  ct->add_option("--pred", o.pred)->required()->check(CLI::IsMember({"ktree", "kbranching", "accelerating"}));
  ct->add_option("--k", o.k);
  ct->add_option("--d", o.d, "inspection depth (default: the tree's depth)");

  auto* pf = app.add_subcommand("pushforward", "preimage of a tree under a surjection");
  pf->add_option("tree", o.tree_file, "tree file")->required();
  pf->add_option("--g", o.g_file, "surjection file")->required();
  pf->add_option("--out", o.out_file);

  auto* mc = app.add_subcommand("min-cover", "least k-branching cover of b^d");
  mc->add_option("--b", o.b)->required();
  mc->add_option("--k", o.k);
  mc->add_option("--d", o.d);
  mc->add_option("--out", o.out_file, "witness file (default cover_witness.json)");
  mc->add_flag("--table", o.table, "print the table over k = 2..b-1 instead");

  auto* rn = app.add_subcommand("run", "run an engine and write its record");
  rn->add_option("--engine", o.engine)
      ->required()
      ->check(CLI::IsMember({"surviving", "build3", "traceable", "accelerating"}));
  rn->add_option("--family", o.family, "family file, or 'library' or 'empty'");
  rn->add_option("--stages", o.stages);
  rn->add_option("--depth", o.depth);
  rn->add_option("--fuel", o.fuel);
  rn->add_option("--k", o.k);
  rn->add_option("--out", o.out_file);
  rn->add_option("--tree-out", o.tree_out, "also write the final tree");
  rn->add_option("--start", o.start, "traceable start tree: build3 output or the full ternary tree")
      ->check(CLI::IsMember({"build3", "full"}));

  auto* vf = app.add_subcommand("verify", "re-check a run record");
  vf->add_option("record", o.record_file)->required();

  auto* em = app.add_subcommand("emit", "render a tree, trace or record");
  em->add_option("input", o.input)->required();
  em->add_flag("--dot", o.dot);
  em->add_option("--trace", o.trace, "1-based trace of a record");
  em->add_option("--out", o.out_file);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (ct->parsed()) return check_tree(o, out, err);
    if (pf->parsed()) return pushforward(o, out);
    if (mc->parsed()) return min_cover_cmd(o, out, err);
    if (rn->parsed()) return run_cmd(o, out, err);
    if (vf->parsed()) return verify_cmd(o, out, err);
    return emit_cmd(o, out);
  } catch (const SizeGuard& e) {
    err << "budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParseError& e) {
    err << "parse: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace surv
