#include "gclab/caps.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "gclab/error.hpp"

namespace gclab {

CapExceeded::CapExceeded(const std::string& what, std::uint64_t requested, std::uint64_t cap)
    : Error(what + ": " + std::to_string(requested) + " exceeds cap " + std::to_string(cap)),
      requested_(requested),
      cap_(cap) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column) {}

std::uint64_t enumeration_cap() {
  const char* raw = std::getenv("GCLAB_CAP");
  if (raw == nullptr) return kDefaultEnumerationCap;
  std::uint64_t value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return kDefaultEnumerationCap;
  return value;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > kMax / a) return kMax;
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    out = saturating_mul(out, base);
    if (out == std::numeric_limits<std::uint64_t>::max()) break;
  }
  return out;
}

}  // namespace gclab
