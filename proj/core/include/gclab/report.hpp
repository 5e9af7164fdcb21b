#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gclab {

enum class ClaimStatus { kPass, kFail, kBoundChecked, kSkipped };

/// "pass", "fail", "bound-checked" or "skipped".
const char* status_name(ClaimStatus status);

/// Outcome of one claim on one instance.
struct ClaimCheck {
  std::string claim_id;
  std::string instance_id;
  std::uint64_t seed = 0;
  ClaimStatus status = ClaimStatus::kPass;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  /// Machine-readable skip reason such as "cap" or "assumption:strong-consistency".
  std::string reason;
  std::string detail;
};

struct StatusCounts {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t bound_checked = 0;
  std::size_t skipped = 0;
};

struct VerificationReport {
  std::vector<ClaimCheck> checks;

  StatusCounts counts() const;
  bool any_failed() const;
};

/// Header `claim_id,instance_id,seed,status,lhs,rhs,tolerance,detail` and one
/// row per check. Skipped rows prefix the detail with "reason=<reason>".
std::string report_csv(const VerificationReport& report);

void write_report(const std::filesystem::path& path, const VerificationReport& report);

}  // namespace gclab
