#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace talab {

/// Universal verifier output: both sides of an inequality, the constant
/// used, their ratio, and the verdict lhs <= rhs + 1e-9 max(1,|rhs|).
struct InequalityReport {
  std::string id;
  std::string model;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant_used = 0.0;
  double ratio = 0.0;  // lhs/rhs, 0 when both sides vanish
  bool pass = false;
};

InequalityReport make_report(std::string id, std::string model, double lhs, double rhs,
                             double constant_used);

/// A scalar estimate with an error bar, as produced by Monte Carlo or
/// extrapolation backends.
struct Estimate {
  std::string quantity;
  double value = 0.0;
  double std_error = 0.0;
  std::string method;  // analytic | grid | mollified | mc | extrapolated
};

std::string report_to_json(const InequalityReport& r);
void write_reports_csv(std::ostream& os, const std::vector<InequalityReport>& reports);
void write_estimates_csv(std::ostream& os, const std::vector<Estimate>& estimates);

}  // namespace talab
