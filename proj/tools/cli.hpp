#pragma once

#include <ostream>

namespace gclab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailure = 1;
inline constexpr int kExitInputError = 2;

/// Parses argv and dispatches one command. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gclab::cli
