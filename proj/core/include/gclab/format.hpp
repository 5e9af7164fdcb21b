#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gclab {

/// Locale-independent decimal with `significant` significant digits.
/// Infinities print as "inf" / "-inf", NaN as "nan".
std::string format_number(double value, int significant = 12);

/// Shortest locale-independent decimal that parses back to the same double.
std::string format_exact(double value);

/// Locale-independent parse of a whole token; returns false on any junk.
bool parse_double(std::string_view token, double& out);

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Reads a whole file; throws gclab::Error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace gclab
