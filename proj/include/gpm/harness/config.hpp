#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "gpm/boundary.hpp"
#include "gpm/dual_perimeter.hpp"
#include "gpm/set_model.hpp"
#include "gpm/wiener.hpp"
#include "json.hpp"

namespace gpm::harness {

using Json = nlohmann::json;

inline const char* const kTasks[] = {"perimeter", "hausdorff-gauss", "classify",          "rho",
                                     "slice-identity", "wiener",    "verify-main-theorem", "gauss-green",
                                     "unit-ball-volume", "convex-audit"};

struct Budget {
  std::size_t samples = 100000;
  int iterations = 200;
  int degree = 6;
  std::size_t slices = 4000;
  std::size_t cloud_points = 50000;
  std::size_t boundary_points = 2000;
  std::size_t samples_per_radius = 400;
  int quadrature_order = 48;
  int j_min = 3;
  int j_max = 9;
  double delta = 0.01;

  ClassifierBudget classifier() const { return {j_min, j_max, samples_per_radius, delta}; }
  DualOptions dual(std::uint64_t seed) const;
};

/// A fully specified experiment. `params` carries the task-specific keys
/// (k, ks, levels, points, expect, ...) verbatim.
struct ExperimentConfig {
  std::string task;
  std::string name;
  Json fixture;
  Budget budget;
  std::uint64_t seed = 1;
  double tolerance = 0.05;  // relative, unless a verdict states otherwise
  Json params = Json::object();
  std::string output;       // directory; empty means the caller decides

  Json to_json() const;
};

/// Throws ConfigError with a message naming the offending key.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

/// Dimension envelope, budget floors, task-specific keys.
void validate(const ExperimentConfig& config);

/// Multiplies every sample-count budget by `scale`.
void scale_budget(ExperimentConfig& config, double scale);

/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_digest(const ExperimentConfig& config);

/// Builds a set from a declarative tree: {"kind": ..., parameters...}.
ImplicitSet build_fixture(const Json& spec);

/// Path domain: {"interval": [lo, hi]} with null for an infinite end, or
/// {"omega": fixture}; optional "exterior_ball_radius".
DomainSpec build_domain(const Json& spec);

}  // namespace gpm::harness
