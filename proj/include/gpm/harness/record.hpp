#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gpm::harness {

struct Output {
  double value = 0.0;
  double std_error = 0.0;
};

struct Verdict {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string rule;  // how observed, target and tolerance were compared
};

struct ResultRecord {
  std::string version;
  std::string config_digest;
  std::string task;
  std::string name;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, Output>> outputs;
  std::vector<Verdict> verdicts;
  double wall_clock_s = 0.0;

  bool passed() const;
  void add_output(const std::string& key, double value, double std_error = 0.0);
  const Output* find(const std::string& key) const;

  /// |observed - target| <= tolerance.
  void check_near(const std::string& verdict, double observed, double target, double tolerance,
                  const std::string& rule);
  /// observed <= bound.
  void check_at_most(const std::string& verdict, double observed, double bound, const std::string& rule);
  /// observed >= bound.
  void check_at_least(const std::string& verdict, double observed, double bound, const std::string& rule);

  nlohmann::json to_json() const;
};

std::string artifact_version();

/// Appends one JSON line.
void write_json_line(std::ostream& out, const ResultRecord& record);

/// One CSV row per output: task, name, digest, output, value, std_error.
void write_summary_csv(std::ostream& out, const std::vector<ResultRecord>& records, bool header);

}  // namespace gpm::harness
