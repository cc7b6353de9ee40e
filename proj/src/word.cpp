#include "surv/word.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace surv {

bool Word::is_prefix_of(const Word& other) const {
  if (size() > other.size()) return false;
  return std::equal(begin(), end(), other.begin());
}

Letter Word::max_entry() const {
  return empty() ? 0 : *std::max_element(begin(), end());
}

std::string Word::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(entries_[i]);
  }
  return out;
}

std::string Word::pretty() const {
  std::string out = "<";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ',';
    out += std::to_string(entries_[i]);
  }
  return out + ">";
}

Word Word::parse(const std::string& text) {
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == ' ') {
      ++pos;
      continue;
    }
    Letter value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{} || ptr == text.data() + pos)
      throw std::invalid_argument("malformed word entry in '" + text + "'");
    w.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
    if (pos < text.size() && text[pos] != ' ')
      throw std::invalid_argument("malformed word entry in '" + text + "'");
  }
  return w;
}

Word zeros(std::size_t n) { return Word(std::vector<Letter>(n, 0)); }

}  // namespace surv
