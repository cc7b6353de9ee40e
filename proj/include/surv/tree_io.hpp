#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "surv/tree.hpp"

namespace surv {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Word-list format:
//   tree alphabet=<b|omega> depth=<d>
//   one word per line (space separated), empty line for the root, shortlex order.
std::string write_tree(const FiniteTree& t);
FiniteTree read_tree(const std::string& text);

// Surjection format:
//   surjection codomain=<n>
//   g(0) g(1) ... g(m-1)
std::string write_surjection(const Surjection& g);
Surjection read_surjection(const std::string& text);

// Shared by trees and traces: the body lines after a header.
std::string write_word_lines(const std::vector<Word>& words);
std::vector<Word> read_word_lines(const std::vector<std::string>& lines, std::size_t first_line_number);
std::vector<std::string> split_lines(const std::string& text);
// "key=value" header fields after a leading tag.
std::vector<std::pair<std::string, std::string>> parse_header(const std::string& line, const std::string& tag,
                                                              std::size_t line_number);

std::string to_dot(const FiniteTree& t, const std::string& name = "tree");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace surv
