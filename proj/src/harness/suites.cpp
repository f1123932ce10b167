#include "gpm/harness/suites.hpp"

#include <cmath>
#include <numbers>

#include "gpm/errors.hpp"
#include "gpm/harness/runner.hpp"

namespace gpm::harness {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

Json half_space(Json normal, double offset) { return {{"kind", "half_space"}, {"normal", normal}, {"offset", offset}}; }
Json ball(Json center, double radius) { return {{"kind", "ball"}, {"center", center}, {"radius", radius}}; }

std::vector<Json> raw_suite(const std::string& name, std::uint64_t seed) {
  const double s = std::numbers::sqrt2 / 2.0;
  if (name == "half-space") {
    std::vector<Json> out;
    for (double a : {0.0, 1.0}) {
      out.push_back({{"task", "perimeter"},
                     {"name", "half-space a=" + std::to_string(static_cast<int>(a))},
                     {"fixture", half_space({1, 0}, a)},
                     {"budget", {{"samples", 100000}, {"iterations", 200}, {"degree", 6}}},
                     {"tolerance", 0.05},
                     {"expect", {{"dual", kInvSqrt2Pi * std::exp(-0.5 * a * a)}}},
                     {"max_wall_clock_s", 60.0}});
    }
    return out;
  }
  if (name == "main-theorem") {
    return {{{"task", "verify-main-theorem"},
             {"name", "ball r=1 in R^2"},
             {"fixture", ball({0, 0}, 1.0)},
             {"budget", {{"samples", 100000}, {"iterations", 200}, {"degree", 6}, {"cloud_points", 50000},
                         {"samples_per_radius", 200}, {"slices", 4000}}},
             {"tolerance", 0.10},
             {"target", std::exp(-0.5)}}};
  }
  if (name == "gauss-green") {
    std::vector<Json> out;
    const std::pair<const char*, Json> fixtures[] = {{"half-space", half_space({1, 0}, 0.0)},
                                                     {"ball", ball({0, 0}, 1.0)}};
    // Five consecutive seeds starting at seed + 10.
    for (const auto& [label, fixture] : fixtures) {
      for (std::uint64_t k = 10; k < 15; ++k) {
        out.push_back({{"task", "gauss-green"},
                       {"name", std::string(label) + " seed " + std::to_string(seed + k)},
                       {"fixture", fixture},
                       {"field", {{"degree", 1}}},
                       {"budget", {{"samples", 100000}}},
                       {"seed", seed + k}});
      }
    }
    return out;
  }
  if (name == "monotonicity") {
    return {{{"task", "rho"},
             {"name", "tilted half-space in R^3"},
             {"fixture", half_space({s, s, 0}, 0.0)},
             {"ks", {1, 2, 3}},
             {"budget", {{"slices", 4000}}},
             {"tolerance", 0.05},
             {"expect", {{"rho_k1", 0.5 / std::sqrt(std::numbers::pi)}, {"rho_k2", kInvSqrt2Pi}, {"rho_k3", kInvSqrt2Pi}}}},
            {{"task", "rho"},
             {"name", "ball r=1 in R^4"},
             {"fixture", ball({0, 0, 0, 0}, 1.0)},
             {"ks", {2, 3, 4}},
             {"budget", {{"slices", 2000}}}},
            {{"task", "rho"},
             {"name", "axis half-space in R^3"},
             {"fixture", half_space({1, 0, 0}, 0.5)},
             {"ks", {1, 2, 3}},
             {"budget", {{"slices", 2000}}}}};
  }
  if (name == "slice-identity") {
    const Json budget = {{"samples", 100000}, {"iterations", 200}, {"degree", 3}};
    return {{{"task", "slice-identity"}, {"name", "half-space in R^3"}, {"fixture", half_space({1, 0, 0}, 0.0)},
             {"k", 1}, {"budget", budget}},
            {{"task", "slice-identity"}, {"name", "ball r=2 in R^2"}, {"fixture", ball({0, 0}, 2.0)},
             {"k", 1}, {"budget", budget}}};
  }
  if (name == "boundary") {
    const double collar = std::ldexp(1.0, -7);
    return {{{"task", "classify"},
             {"name", "disk with spike"},
             {"fixture", {{"kind", "union"},
                          {"of", {ball({0, 0}, 1.0), {{"kind", "segment"}, {"p", {1, 0}}, {"q", {2, 0}}}}}}},
             {"budget", {{"j_min", 5}, {"j_max", 9}, {"samples_per_radius", 10000}, {"delta", 0.01}}},
             {"groups",
              {{{"name", "circle"},
                {"points", {{"source", "chart"}, {"fixture", ball({0, 0}, 1.0)}, {"count", 200}}},
                {"expect_class", "MTBoundary"},
                {"min_fraction", 0.95},
                {"expect_topological_boundary", true}},
               {{"name", "spike"},
                {"points", {{"source", "segment"}, {"p", {1, 0}}, {"q", {2, 0}}, {"t_range", {collar, 1.0 - collar}},
                            {"count", 200}}},
                {"expect_class", "NullDensity"},
                {"min_fraction", 1.0},
                {"expect_topological_boundary", true}}}}}};
  }
  if (name == "convex") {
    return {{{"task", "convex-audit"}, {"name", "square with corners"},
             {"fixture", {{"kind", "box"}, {"lo", {-1, -1}}, {"hi", {1, 1}}}}, {"min_fraction", 0.95}},
            {{"task", "convex-audit"}, {"name", "ball r=1 in R^3"}, {"fixture", ball({0, 0, 0}, 1.0)},
             {"min_fraction", 0.95}},
            {{"task", "convex-audit"}, {"name", "path event level 1"},
             {"fixture", {{"kind", "path_event"}, {"domain", {{"interval", {-1.0, 1.0}}}}, {"level", 1}}},
             {"min_fraction", 0.90}}};
  }
  if (name == "wiener") {
    const Json budget = {{"samples", 100000}, {"iterations", 200}, {"degree", 3}};
    return {{{"task", "wiener"}, {"name", "two-sided barrier"}, {"domain", {{"interval", {-3.0, 3.0}}}},
             {"levels", {0, 1, 2}}, {"budget", budget}},
            {{"task", "wiener"}, {"name", "one-sided barrier"}, {"domain", {{"interval", {nullptr, 1.0}}}},
             {"levels", {0}}, {"budget", budget}, {"tolerance", 0.05},
             {"expect", {{"perimeter_L0", kInvSqrt2Pi * std::exp(-0.5)}}}}};
  }
  if (name == "hausdorff") {
    return {{{"task", "hausdorff-gauss"}, {"name", "unit circle"}, {"fixture", ball({0, 0}, 1.0)},
             {"cloud", {{"source", "bisection"}, {"count", 50000}}}, {"tolerance", 0.10},
             {"expect", {{"spherical_hausdorff", 2.0 * std::numbers::pi}, {"hausdorff_gauss", std::exp(-0.5)}}}},
            {{"task", "hausdorff-gauss"}, {"name", "single point"}, {"fixture", {{"kind", "point"}, {"p", {0.3, -0.2}}}},
             {"cloud", {{"source", "explicit"}, {"points", {{0.3, -0.2}}}}},
             {"expect", {{"spherical_hausdorff", 0.0}, {"hausdorff_gauss", 0.0}}}, {"abs_tolerance", 0.0}},
            {{"task", "unit-ball-volume"}, {"name", "unit ball volumes"}, {"ns", {0, 1, 2}}, {"tolerance", 0.0},
             {"expect", {{"V_0", 1.0}, {"V_1", 2.0}, {"V_2", std::numbers::pi}}}}};
  }
  throw ConfigError("unknown suite '" + name + "' (known: half-space, main-theorem, gauss-green, monotonicity, "
                    "slice-identity, boundary, convex, wiener, hausdorff, all)");
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"half-space", "main-theorem", "gauss-green", "monotonicity", "slice-identity",
          "boundary",   "convex",       "wiener",      "hausdorff"};
}

std::vector<ExperimentConfig> suite_configs(const std::string& name, const SuiteOptions& options) {
  if (name.empty()) throw ConfigError("empty suite name");
  std::vector<Json> raw;
  if (name == "all") {
    for (const std::string& n : suite_names()) {
      auto part = raw_suite(n, options.seed);
      raw.insert(raw.end(), part.begin(), part.end());
    }
  } else {
    raw = raw_suite(name, options.seed);
  }
  std::vector<ExperimentConfig> out;
  for (Json& j : raw) {
    if (!j.contains("seed")) j["seed"] = options.seed;
    ExperimentConfig c = parse_config(j);
    if (options.budget_scale != 1.0) scale_budget(c, options.budget_scale);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ResultRecord> verify_suite(const std::string& name, const SuiteOptions& options) {
  std::vector<ResultRecord> records;
  for (const ExperimentConfig& c : suite_configs(name, options)) records.push_back(run(c));
  return records;
}

}  // namespace gpm::harness
