#include "talab/report.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "talab/numeric.hpp"

namespace talab {

InequalityReport make_report(std::string id, std::string model, double lhs, double rhs,
                             double constant_used) {
  InequalityReport r;
  r.id = std::move(id);
  r.model = std::move(model);
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant_used = constant_used;
  if (rhs == 0.0)
    r.ratio = lhs <= pass_slack(0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  else
    r.ratio = std::max(0.0, lhs / rhs);
  r.pass = lhs <= rhs + pass_slack(rhs);
  return r;
}

std::string report_to_json(const InequalityReport& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["model"] = r.model;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["constant"] = r.constant_used;
  j["ratio"] = std::isfinite(r.ratio) ? r.ratio : -1.0;
  j["verdict"] = r.pass ? "pass" : "fail";
  return j.dump();
}

void write_reports_csv(std::ostream& os, const std::vector<InequalityReport>& reports) {
  os << "id,model,lhs,rhs,constant,ratio,verdict\n";
  os.precision(17);
  for (const auto& r : reports)
    os << r.id << "," << r.model << "," << r.lhs << "," << r.rhs << "," << r.constant_used << ","
       << r.ratio << "," << (r.pass ? "pass" : "fail") << "\n";
}

void write_estimates_csv(std::ostream& os, const std::vector<Estimate>& estimates) {
  os << "quantity,value,std_error,method\n";
  os.precision(17);
  for (const auto& e : estimates)
    os << e.quantity << "," << e.value << "," << e.std_error << "," << e.method << "\n";
}

}  // namespace talab
