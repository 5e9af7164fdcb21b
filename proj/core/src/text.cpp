#include "text.hpp"

namespace gclab::detail {

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
    while (i < raw.size()) {
      while (i < raw.size() && space(raw[i])) ++i;
      if (i >= raw.size()) break;
      std::size_t start = i;
      while (i < raw.size() && !space(raw[i])) ++i;
      line.tokens.push_back(Token{raw.substr(start, i - start), start + 1});
    }
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
    ++number;
  }
  return lines;
}

}  // namespace gclab::detail
