#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tqo/verify.hpp"

namespace tqo {

// First line of every report document. Bump on any format change.
inline constexpr const char* kReportFormat = "tqo-report/1";
inline constexpr const char* kGsdTableFormat = "tqo-gsd-table/1";

// Shortest decimal that round-trips the double ("%.17g").
std::string format_double(double v);

// Canonical report document: version line, commented header, then one
//   check.<name>.<field> = <value>
// line per datum, closing with report.overall. Output is deterministic
// byte for byte in the inputs; nothing time- or path-dependent is written
// (timestamps default to 0 for exactly this reason).
std::string render_report(const std::vector<VerificationReport>& checks,
                          const std::string& title, uint64_t seed);

struct GsdTableRow {
  std::string spec;    // family:algebra:surface:cellulation:size
  std::string method;  // "rank" | "oracle"
  int64_t gsd = 0;
  bool agree = true;   // methods for this spec returned equal values
  std::string error;   // per-row error marker; other fields unset if set
};

std::string render_gsd_table(const std::vector<GsdTableRow>& rows);

}  // namespace tqo
