#include "surv/trace.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "surv/tree_io.hpp"

namespace surv {

std::size_t LevelBound::at(std::size_t n) const {
  if (kind == Kind::Const) return value;
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (value != 0 && out > std::numeric_limits<std::size_t>::max() / value)
      return std::numeric_limits<std::size_t>::max();
    out *= value;
  }
  return out;
}

std::string LevelBound::to_string() const {
  return std::string(kind == Kind::Pow ? "pow:" : "const:") + std::to_string(value);
}

LevelBound LevelBound::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw TraceError("bound descriptor '" + text + "' lacks ':'");
  std::string kind = text.substr(0, colon), number = text.substr(colon + 1);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc{} || ptr != number.data() + number.size() || number.empty())
    throw TraceError("bound descriptor '" + text + "' has a bad value");
  if (kind == "pow") return pow(value);
  if (kind == "const") return constant(value);
  throw TraceError("unknown bound kind '" + kind + "'");
}

TraceTable TraceTable::from_levels(std::vector<std::set<Word>> levels, LevelBound bound) {
  if (levels.empty()) throw TraceError("a trace needs at least level 0");
  for (std::size_t n = 0; n < levels.size(); ++n) {
    for (const auto& w : levels[n]) {
      if (w.size() != n) throw TraceError("word " + w.pretty() + " stored at level " + std::to_string(n));
      if (n > 0 && !levels[n - 1].count(w.parent()))
        throw TraceError("level " + std::to_string(n) + " word " + w.pretty() + " has no parent in level " +
                         std::to_string(n - 1));
    }
    if (levels[n].size() > bound.at(n)) throw BoundExceeded(n, levels[n].size(), bound.at(n));
  }
  return TraceTable(std::move(levels), bound);
}

TraceTable TraceTable::from_words(const std::vector<Word>& words, std::size_t depth, LevelBound bound) {
  std::vector<std::set<Word>> levels(depth + 1);
  for (const auto& w : words) {
    if (w.size() > depth) throw TraceError("word " + w.pretty() + " deeper than trace depth");
    levels[w.size()].insert(w);
  }
  return from_levels(std::move(levels), bound);
}

std::vector<Word> TraceTable::words_shortlex() const {
  std::vector<Word> out;
  for (const auto& level : levels_) out.insert(out.end(), level.begin(), level.end());
  return out;
}

std::set<Letter> TraceTable::position_values(std::size_t n) const {
  std::set<Letter> out;
  if (n + 1 >= levels_.size()) return out;
  for (const auto& w : levels_[n + 1]) out.insert(w[n]);
  return out;
}

FiniteTree TraceTable::as_tree() const { return FiniteTree::from_words(words_shortlex(), std::nullopt, depth()); }

TraceTable from_tree(const FiniteTree& u, LevelBound bound) {
  std::vector<std::set<Word>> levels(u.depth() + 1);
  u.for_each([&](const Word& w, const std::vector<Letter>&) { levels[w.size()].insert(w); });
  return TraceTable::from_levels(std::move(levels), bound);
}

bool goes_through(const Word& prefix, const TraceTable& tr) {
  if (prefix.size() > tr.depth())
    throw std::invalid_argument("prefix " + prefix.pretty() + " longer than trace depth " + std::to_string(tr.depth()));
  for (std::size_t n = 0; n <= prefix.size(); ++n)
    if (!tr.level(n).count(prefix.prefix(n))) return false;
  return true;
}

TraceTable merge(const TraceTable& a, const TraceTable& b, LevelBound bound) {
  if (a.depth() != b.depth()) throw TraceError("merge needs equal depths");
  std::vector<std::set<Word>> levels(a.depth() + 1);
  for (std::size_t n = 0; n <= a.depth(); ++n) {
    levels[n] = a.level(n);
    levels[n].insert(b.level(n).begin(), b.level(n).end());
  }
  return TraceTable::from_levels(std::move(levels), bound);
}

std::string write_trace(const TraceTable& tr) {
  return "trace bound=" + tr.bound().to_string() + " depth=" + std::to_string(tr.depth()) + "\n" +
         write_word_lines(tr.words_shortlex());
}

TraceTable read_trace(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty trace file");
  std::optional<LevelBound> bound;
  std::optional<std::size_t> depth;
  for (const auto& [key, value] : parse_header(lines[0], "trace", 1)) {
    try {
      if (key == "bound") {
        bound = LevelBound::parse(value);
      } else if (key == "depth") {
        std::size_t d = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
        if (ec != std::errc{} || ptr != value.data() + value.size()) throw TraceError("bad depth '" + value + "'");
        depth = d;
      } else {
        throw TraceError("unknown header field '" + key + "'");
      }
    } catch (const TraceError& e) {
      throw ParseError(1, e.what());
    }
  }
  if (!bound || !depth) throw ParseError(1, "trace header needs bound and depth");
  auto words = read_word_lines({lines.begin() + 1, lines.end()}, 2);
  for (std::size_t i = 1; i < words.size(); ++i)
    if (!ShortLex{}(words[i - 1], words[i])) throw ParseError(i + 2, "words out of shortlex order or repeated");
  try {
    return TraceTable::from_words(words, *depth, *bound);
  } catch (const TraceError& e) {
    throw ParseError(1, e.what());
  }
}

}  // namespace surv
