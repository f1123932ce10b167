#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpm/harness/config.hpp"
#include "gpm/harness/record.hpp"

namespace gpm::harness {

struct SuiteOptions {
  std::uint64_t seed = 1;
  double budget_scale = 1.0;
};

/// Suite names, in a fixed order.
std::vector<std::string> suite_names();

/// The configs a suite runs, after applying the options.
std::vector<ExperimentConfig> suite_configs(const std::string& name, const SuiteOptions& options);

/// Runs every config of the suite. Throws ConfigError for an unknown name.
std::vector<ResultRecord> verify_suite(const std::string& name, const SuiteOptions& options = {});

}  // namespace gpm::harness
