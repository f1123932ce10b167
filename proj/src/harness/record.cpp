#include "gpm/harness/record.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace gpm::harness {

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

// JSON has no representation for non-finite numbers; keep them readable.
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

std::string artifact_version() { return GPM_VERSION; }

bool ResultRecord::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

void ResultRecord::add_output(const std::string& key, double value, double std_error) {
  outputs.emplace_back(key, Output{value, std_error});
}

const Output* ResultRecord::find(const std::string& key) const {
  for (const auto& [k, v] : outputs)
    if (k == key) return &v;
  return nullptr;
}

void ResultRecord::check_near(const std::string& verdict, double observed, double target, double tolerance,
                              const std::string& rule) {
  const bool pass = std::isfinite(observed) && std::abs(observed - target) <= tolerance;
  verdicts.push_back({verdict, pass, observed, target, tolerance,
                      rule.empty() ? "|observed - target| <= " + fmt(tolerance) : rule});
}

void ResultRecord::check_at_most(const std::string& verdict, double observed, double bound, const std::string& rule) {
  verdicts.push_back({verdict, std::isfinite(observed) && observed <= bound, observed, bound, 0.0,
                      rule.empty() ? "observed <= " + fmt(bound) : rule});
}

void ResultRecord::check_at_least(const std::string& verdict, double observed, double bound,
                                  const std::string& rule) {
  verdicts.push_back({verdict, std::isfinite(observed) && observed >= bound, observed, bound, 0.0,
                      rule.empty() ? "observed >= " + fmt(bound) : rule});
}

nlohmann::json ResultRecord::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : outputs) out[k] = {{"value", number(v.value)}, {"std_error", number(v.std_error)}};
  nlohmann::json verdict_list = nlohmann::json::array();
  for (const Verdict& v : verdicts) {
    verdict_list.push_back({{"name", v.name},
                            {"pass", v.pass},
                            {"observed", number(v.observed)},
                            {"target", number(v.target)},
                            {"tolerance", number(v.tolerance)},
                            {"rule", v.rule}});
  }
  return {{"version", version},   {"config_digest", config_digest}, {"task", task},
          {"name", name},         {"seed", seed},                   {"outputs", out},
          {"verdicts", verdict_list}, {"pass", passed()},           {"wall_clock_s", wall_clock_s}};
}

void write_json_line(std::ostream& out, const ResultRecord& record) { out << record.to_json().dump() << '\n'; }

void write_summary_csv(std::ostream& out, const std::vector<ResultRecord>& records, bool header) {
  if (header) out << "task,name,config_digest,output,value,std_error\n";
  out.precision(17);
  for (const ResultRecord& r : records)
    for (const auto& [k, v] : r.outputs)
      out << r.task << ',' << r.name << ',' << r.config_digest << ',' << k << ',' << v.value << ',' << v.std_error
          << '\n';
}

}  // namespace gpm::harness
