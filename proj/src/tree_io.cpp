#include "surv/tree_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace surv {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::pair<std::string, std::string>> parse_header(const std::string& line, const std::string& tag,
                                                              std::size_t line_number) {
  std::istringstream in(line);
  std::string word;
  if (!(in >> word) || word != tag) throw ParseError(line_number, "expected '" + tag + "' header");
  std::vector<std::pair<std::string, std::string>> fields;
  while (in >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw ParseError(line_number, "malformed header field '" + word + "'");
    fields.emplace_back(word.substr(0, eq), word.substr(eq + 1));
  }
  return fields;
}

std::string write_word_lines(const std::vector<Word>& words) {
  std::string out;
  for (const auto& w : words) out += w.to_string() + "\n";
  return out;
}

std::vector<Word> read_word_lines(const std::vector<std::string>& lines, std::size_t first_line_number) {
  std::vector<Word> words;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      words.push_back(Word::parse(lines[i]));
    } catch (const std::exception& e) {
      throw ParseError(first_line_number + i, e.what());
    }
  }
  return words;
}

namespace {

std::size_t parse_size(const std::string& value, std::size_t line) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ParseError(line, "expected a natural number, got '" + value + "'");
  return out;
}

}  // namespace

std::string write_tree(const FiniteTree& t) {
  std::string out = "tree alphabet=";
  out += t.alphabet_bound() ? std::to_string(*t.alphabet_bound()) : "omega";
  out += " depth=" + std::to_string(t.depth()) + "\n";
  return out + write_word_lines(t.nodes_shortlex());
}

FiniteTree read_tree(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty tree file");
  std::optional<Letter> bound;
  std::optional<std::size_t> depth;
  for (const auto& [key, value] : parse_header(lines[0], "tree", 1)) {
    if (key == "alphabet") {
      if (value != "omega") bound = static_cast<Letter>(parse_size(value, 1));
    } else if (key == "depth") {
      depth = parse_size(value, 1);
    } else {
      throw ParseError(1, "unknown header field '" + key + "'");
    }
  }
  if (!depth) throw ParseError(1, "header is missing depth");
  auto words = read_word_lines({lines.begin() + 1, lines.end()}, 2);
  for (std::size_t i = 1; i < words.size(); ++i)
    if (!ShortLex{}(words[i - 1], words[i])) throw ParseError(i + 2, "words out of shortlex order or repeated");
  try {
    return FiniteTree::from_words(words, bound, *depth);
  } catch (const TreeError& e) {
    // Locate the first offending line for the diagnostic.
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      bool bad = w.size() > *depth || (bound && !w.empty() && w.max_entry() >= *bound) ||
                 (!w.empty() && !std::binary_search(words.begin(), words.end(), w.parent(), ShortLex{}));
      if (bad) throw ParseError(i + 2, e.what());
    }
    throw ParseError(1, e.what());
  }
}

std::string to_dot(const FiniteTree& t, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n  node [shape=box, fontname=\"monospace\"];\n";
  auto id = [](const Word& w) { return "\"w" + w.to_string() + "\""; };
  for (const auto& w : t.nodes_shortlex()) {
    out << "  " << id(w) << " [label=\"" << w.pretty() << "\"";
    if (t.child_count(w) >= 2) out << ", style=filled, fillcolor=\"#f4c542\"";
    out << "];\n";
  }
  for (const auto& w : t.nodes_shortlex())
    for (Letter c : t.children(w)) out << "  " << id(w) << " -> " << id(w.child(c)) << ";\n";
  out << "}\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

std::string write_surjection(const Surjection& g) {
  std::string out = "surjection codomain=" + std::to_string(g.codomain_size()) + "\n";
  for (std::size_t i = 0; i < g.table().size(); ++i) out += (i ? " " : "") + std::to_string(g.table()[i]);
  return out + "\n";
}

Surjection read_surjection(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty surjection file");
  std::optional<std::size_t> codomain;
  for (const auto& [key, value] : parse_header(lines[0], "surjection", 1)) {
    if (key != "codomain") throw ParseError(1, "unknown header field '" + key + "'");
    codomain = parse_size(value, 1);
  }
  if (!codomain) throw ParseError(1, "header is missing codomain");
  if (lines.size() < 2) throw ParseError(2, "missing table line");
  auto table = read_word_lines({lines[1]}, 2);
  for (std::size_t i = 2; i < lines.size(); ++i)
    if (!lines[i].empty()) throw ParseError(i + 1, "unexpected content after the table");
  try {
    return Surjection(std::vector<Letter>(table[0].begin(), table[0].end()), static_cast<Letter>(*codomain));
  } catch (const std::invalid_argument& e) {
    throw ParseError(2, e.what());
  }
}

}  // namespace surv
