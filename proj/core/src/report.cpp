#include "gclab/report.hpp"

#include "gclab/format.hpp"

namespace gclab {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

const char* status_name(ClaimStatus status) {
  switch (status) {
    case ClaimStatus::kPass: return "pass";
    case ClaimStatus::kFail: return "fail";
    case ClaimStatus::kBoundChecked: return "bound-checked";
    case ClaimStatus::kSkipped: return "skipped";
  }
  return "unknown";
}

StatusCounts VerificationReport::counts() const {
  StatusCounts c;
  for (const auto& check : checks) {
    switch (check.status) {
      case ClaimStatus::kPass: ++c.pass; break;
      case ClaimStatus::kFail: ++c.fail; break;
      case ClaimStatus::kBoundChecked: ++c.bound_checked; break;
      case ClaimStatus::kSkipped: ++c.skipped; break;
    }
  }
  return c;
}

bool VerificationReport::any_failed() const { return counts().fail > 0; }

std::string report_csv(const VerificationReport& report) {
  std::string out = "claim_id,instance_id,seed,status,lhs,rhs,tolerance,detail\n";
  for (const auto& c : report.checks) {
    std::string detail = c.detail;
    if (c.status == ClaimStatus::kSkipped) {
      detail = "reason=" + c.reason + (detail.empty() ? "" : "; " + detail);
    }
    out += csv_field(c.claim_id) + ',' + csv_field(c.instance_id) + ',' + std::to_string(c.seed) + ',' +
           status_name(c.status) + ',' + format_number(c.lhs) + ',' + format_number(c.rhs) + ',' +
           format_number(c.tolerance) + ',' + csv_field(detail) + '\n';
  }
  return out;
}

void write_report(const std::filesystem::path& path, const VerificationReport& report) {
  write_file_atomic(path, report_csv(report));
}

}  // namespace gclab
