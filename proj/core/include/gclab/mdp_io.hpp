#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gclab/mdp.hpp"

namespace gclab {

/// Canonical text form:
///   mdp v1
///   states: s1 s2 ...
///   actions <state>: a1 a2 ...
///   t <state> <action> <state'> <prob>
/// Transitions are listed in (state, action, successor) index order and zero
/// entries are omitted. Probabilities use the shortest exact decimal.
std::string to_text(const FiniteMdp& mdp);

/// Parses the text form. '#' starts a comment. Throws ParseError with line and
/// column for syntax errors and ValidationError for invalid kernels.
FiniteMdp parse_mdp(std::string_view text);

FiniteMdp load_mdp(const std::filesystem::path& path);
void save_mdp(const std::filesystem::path& path, const FiniteMdp& mdp);

}  // namespace gclab
