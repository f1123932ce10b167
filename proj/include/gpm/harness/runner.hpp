#pragma once

#include <string>
#include <vector>

#include "gpm/harness/config.hpp"
#include "gpm/harness/record.hpp"

namespace gpm::harness {

/// Validates and dispatches to the task module. Errors propagate
/// (ConfigError for invalid configs, NumericalError for numerical failures).
ResultRecord run(const ExperimentConfig& config);

/// Appends records to <dir>/results.jsonl and <dir>/summary.csv.
void persist(const std::vector<ResultRecord>& records, const std::string& dir);

}  // namespace gpm::harness
