#pragma once

#include <cstdint>

namespace gclab {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Current cap on exhaustive enumerations.
/// Reads the GCLAB_CAP environment variable on every call and falls back
/// to kDefaultEnumerationCap when it is unset or malformed.
std::uint64_t enumeration_cap();

/// a * b, saturating at UINT64_MAX.
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

/// base^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp);

}  // namespace gclab
