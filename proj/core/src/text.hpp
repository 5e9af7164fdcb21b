#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace gclab::detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;  // 1-based
  std::vector<Token> tokens;
};

/// Splits text into lines of whitespace-separated tokens, dropping '#' comments.
/// Lines without tokens are kept so that line numbers stay exact.
std::vector<Line> tokenize(std::string_view text);

}  // namespace gclab::detail
