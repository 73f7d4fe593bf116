#include "tqo/report.hpp"

#include <cstdio>

namespace tqo {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_report(const std::vector<VerificationReport>& checks,
                          const std::string& title, uint64_t seed) {
  std::string out;
  out += kReportFormat;
  out += "\n# ";
  out += title;
  out += "\n# seed = " + std::to_string(seed);
  out += "\n# term naming: dw A_v,B_f and lw Q_v,B_p correspond to H_v,H_f\n";

  bool overall = true;
  for (const VerificationReport& c : checks) {
    const std::string pre = "check." + c.check + ".";
    out += pre + "model = " + c.model + "\n";
    const std::string oc =
        c.outcome.empty() ? (c.pass ? "pass" : "fail") : c.outcome;
    out += pre + "outcome = " + oc + "\n";
    out += pre + "seed = " + std::to_string(c.seed) + "\n";
    out += pre + "timestamp = " + std::to_string(c.timestamp) + "\n";
    for (const auto& [k, v] : c.parameters)
      out += pre + "param." + k + " = " + v + "\n";
    for (const ResidualEntry& r : c.residuals) {
      out += pre + "residual." + r.name + " = " + format_double(r.value) + "\n";
      out += pre + "tolerance." + r.name + " = " + format_double(r.tolerance) +
             "\n";
    }
    for (const auto& [k, v] : c.scalars)
      out += pre + "scalar." + k + " = " + format_double(v) + "\n";
    overall = overall && c.pass;
  }
  out += std::string("report.overall = ") + (overall ? "pass" : "fail") + "\n";
  return out;
}

std::string render_gsd_table(const std::vector<GsdTableRow>& rows) {
  std::string out;
  out += kGsdTableFormat;
  out += "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const GsdTableRow& r = rows[i];
    out += "row " + std::to_string(i) + ": " + r.spec;
    if (!r.error.empty()) {
      out += " error=" + r.error + "\n";
      continue;
    }
    out += " method=" + r.method + " gsd=" + std::to_string(r.gsd) +
           " agree=" + (r.agree ? "yes" : "no") + "\n";
  }
  return out;
}

}  // namespace tqo
