#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gclab/report.hpp"

namespace gclab {

struct ClaimInfo {
  std::string id;
  /// Theorem or proposition the check is drawn from.
  std::string citation;
  std::string summary;
};

/// Every registered claim, in report order.
const std::vector<ClaimInfo>& claim_registry();

/// Throws InvalidArgument for an unknown id.
const ClaimInfo& claim_info(const std::string& id);

/// Size knobs for the random instances a claim draws.
struct InstanceConfig {
  std::size_t n_states = 4;
  std::size_t n_actions = 2;
  std::size_t branching = 2;
};

/// Runs one claim on one instance. The instance is a deterministic function
/// of (id, config, seed). Computation errors become skipped checks.
ClaimCheck run_claim(const std::string& id, const InstanceConfig& config, std::uint64_t seed);

struct SuiteConfig {
  /// Empty means every registered claim.
  std::vector<std::string> claims;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> sizes{4};
  std::size_t n_actions = 2;
  std::size_t branching = 2;
};

/// Cross product seeds x sizes x claims in that nesting order.
VerificationReport random_suite(const SuiteConfig& config);

}  // namespace gclab
