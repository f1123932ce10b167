#include "gpm/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gpm/errors.hpp"
#include "gpm/wiener.hpp"

namespace gpm::harness {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

Vec vec_of(const Json& decl, const char* key) {
  if (!decl.contains(key) || !decl.at(key).is_array()) bad(std::string("missing array '") + key + "'");
  Vec out;
  for (const Json& v : decl.at(key)) {
    if (!v.is_number()) bad(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double num_of(const Json& decl, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!decl.contains(key)) {
    if (fallback) return *fallback;
    bad(std::string("missing number '") + key + "'");
  }
  if (!decl.at(key).is_number()) bad(std::string("'") + key + "' must be a number");
  return decl.at(key).get<double>();
}

int int_of(const Json& decl, const char* key) {
  const double v = num_of(decl, key);
  if (v != std::floor(v)) bad(std::string("'") + key + "' must be an integer");
  return static_cast<int>(v);
}

template <class T>
void read_field(const Json& b, const char* key, T& field) {
  if (!b.contains(key)) return;
  const Json& v = b.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) bad(std::string("budget.") + key + " must be a number");
    field = v.get<T>();
  } else {
    if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == std::floor(v.get<double>())))
      bad(std::string("budget.") + key + " must be an integer");
    const double d = v.get<double>();
    if (std::is_unsigned_v<T> && d < 0) bad(std::string("budget.") + key + " must be nonnegative");
    field = static_cast<T>(d);
  }
}

ImplicitSet build_domain_set(const Json& decl) {
  if (decl.contains("interval")) {
    const Json& iv = decl.at("interval");
    if (!iv.is_array() || iv.size() != 2) bad("domain.interval must be [lo, hi] (null for infinite)");
    const bool lo_inf = iv[0].is_null(), hi_inf = iv[1].is_null();
    if (lo_inf && hi_inf) return make_full_space(1);
    if (lo_inf) return make_half_space({1.0}, iv[1].get<double>());
    if (hi_inf) return make_half_space({-1.0}, -iv[0].get<double>());
    return make_box({iv[0].get<double>()}, {iv[1].get<double>()});
  }
  if (decl.contains("omega")) return build_fixture(decl.at("omega"));
  bad("domain needs 'interval' or 'omega'");
}

}  // namespace

DualOptions Budget::dual(std::uint64_t seed) const {
  DualOptions o;
  o.degree = degree;
  o.iterations = iterations;
  o.samples = samples;
  o.seed = seed;
  return o;
}

Json ExperimentConfig::to_json() const {
  Json j = params;
  j["task"] = task;
  if (!name.empty()) j["name"] = name;
  if (!fixture.is_null()) j["fixture"] = fixture;
  j["seed"] = seed;
  j["tolerance"] = tolerance;
  if (!output.empty()) j["output"] = output;
  j["budget"] = {{"samples", budget.samples},
                 {"iterations", budget.iterations},
                 {"degree", budget.degree},
                 {"slices", budget.slices},
                 {"cloud_points", budget.cloud_points},
                 {"boundary_points", budget.boundary_points},
                 {"samples_per_radius", budget.samples_per_radius},
                 {"quadrature_order", budget.quadrature_order},
                 {"j_min", budget.j_min},
                 {"j_max", budget.j_max},
                 {"delta", budget.delta}};
  return j;
}

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) bad("top level must be an object");
  ExperimentConfig c;
  if (!j.contains("task") || !j.at("task").is_string()) bad("missing string 'task'");
  c.task = j.at("task").get<std::string>();
  if (std::find(std::begin(kTasks), std::end(kTasks), c.task) == std::end(kTasks)) bad("unknown task '" + c.task + "'");
  for (const auto& [key, value] : j.items()) {
    if (key == "task") continue;
    if (key == "name") {
      c.name = value.get<std::string>();
    } else if (key == "fixture") {
      c.fixture = value;
    } else if (key == "seed") {
      if (!value.is_number_integer() || value.get<long long>() < 0) bad("'seed' must be a nonnegative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "tolerance") {
      if (!value.is_number() || value.get<double>() < 0) bad("'tolerance' must be a nonnegative number");
      c.tolerance = value.get<double>();
    } else if (key == "output") {
      c.output = value.get<std::string>();
    } else if (key == "budget") {
      static const std::set<std::string> known = {"samples", "iterations",         "degree",           "slices",
                                                  "cloud_points", "boundary_points", "samples_per_radius",
                                                  "quadrature_order", "j_min", "j_max", "delta"};
      if (!value.is_object()) bad("'budget' must be an object");
      for (const auto& [bk, bv] : value.items())
        if (!known.count(bk)) bad("unknown budget key '" + bk + "'");
      Budget& b = c.budget;
      read_field(value, "samples", b.samples);
      read_field(value, "iterations", b.iterations);
      read_field(value, "degree", b.degree);
      read_field(value, "slices", b.slices);
      read_field(value, "cloud_points", b.cloud_points);
      read_field(value, "boundary_points", b.boundary_points);
      read_field(value, "samples_per_radius", b.samples_per_radius);
      read_field(value, "quadrature_order", b.quadrature_order);
      read_field(value, "j_min", b.j_min);
      read_field(value, "j_max", b.j_max);
      read_field(value, "delta", b.delta);
    } else {
      c.params[key] = value;
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  const Budget& b = c.budget;
  if (b.samples < 1000) bad("budget.samples must be at least 1000");
  if (b.iterations < 1) bad("budget.iterations must be at least 1");
  if (b.degree < 0 || b.degree > 12) bad("budget.degree must lie in [0, 12]");
  if (b.slices < 2) bad("budget.slices must be at least 2");
  if (b.cloud_points < 100) bad("budget.cloud_points must be at least 100");
  if (b.boundary_points < 1) bad("budget.boundary_points must be at least 1");
  if (b.samples_per_radius < 100) bad("budget.samples_per_radius must be at least 100");
  if (b.quadrature_order < 2 || b.quadrature_order > 400) bad("budget.quadrature_order must lie in [2, 400]");
  if (b.j_min >= b.j_max || b.j_min < -8 || b.j_max > 60) bad("budget.j_min < budget.j_max required, within [-8, 60]");
  if (!(b.delta > 0.0 && b.delta < 0.5)) bad("budget.delta must lie in (0, 1/2)");

  if (c.task == "unit-ball-volume") {
    if (!c.params.contains("ns") || !c.params.at("ns").is_array()) bad("unit-ball-volume needs array 'ns'");
    return;
  }
  if (c.task == "wiener") {
    if (!c.params.contains("domain")) bad("wiener needs 'domain'");
    if (!c.params.contains("levels") || !c.params.at("levels").is_array() || c.params.at("levels").empty())
      bad("wiener needs a nonempty array 'levels'");
    int prev = -1;
    for (const Json& l : c.params.at("levels")) {
      if (!l.is_number_integer()) bad("wiener levels must be integers");
      const int level = l.get<int>();
      if (level < 0 || level > kMaxPathLevel) bad("wiener level outside the supported envelope [0, 4]");
      if (level <= prev) bad("wiener levels must increase");
      prev = level;
    }
    try {
      const ImplicitSet omega = build_domain_set(c.params.at("domain"));
      if (omega.dim() > kMaxPathDim) bad("wiener spatial dimension outside the supported envelope [1, 2]");
      build_domain(c.params.at("domain"));
    } catch (const ContractError& e) {
      bad(std::string("wiener domain: ") + e.what());
    }
    return;
  }
  if (c.fixture.is_null()) bad("task '" + c.task + "' needs a 'fixture'");
  const ImplicitSet set = build_fixture(c.fixture);
  const int m = set.dim();
  auto k_in_range = [&](const Json& v, const char* what) {
    if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > m)
      bad(std::string(what) + " must be an integer in [1, " + std::to_string(m) + "]");
  };
  if (c.task == "rho") {
    if (!c.params.contains("ks") || !c.params.at("ks").is_array() || c.params.at("ks").empty())
      bad("rho needs a nonempty array 'ks'");
    int prev = 0;
    for (const Json& k : c.params.at("ks")) {
      k_in_range(k, "rho ks entries");
      if (k.get<int>() <= prev) bad("rho ks must increase");
      prev = k.get<int>();
    }
  }
  if (c.task == "slice-identity") {
    if (!c.params.contains("k")) bad("slice-identity needs 'k'");
    k_in_range(c.params.at("k"), "slice-identity k");
  }
  if (c.task == "classify") {
    if (!c.params.contains("groups") || !c.params.at("groups").is_array() || c.params.at("groups").empty())
      bad("classify needs a nonempty array 'groups'");
  }
}

void scale_budget(ExperimentConfig& c, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) bad("budget scale must be positive");
  auto s = [scale](std::size_t& v) { v = static_cast<std::size_t>(std::llround(static_cast<double>(v) * scale)); };
  s(c.budget.samples);
  s(c.budget.slices);
  s(c.budget.cloud_points);
  s(c.budget.boundary_points);
  s(c.budget.samples_per_radius);
}

std::string config_digest(const ExperimentConfig& config) {
  const std::string text = config.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ImplicitSet build_fixture(const Json& decl) {
  if (!decl.is_object() || !decl.contains("kind") || !decl.at("kind").is_string())
    bad("fixture must be an object with a string 'kind'");
  const std::string kind = decl.at("kind").get<std::string>();
  try {
    if (kind == "half_space") return make_half_space(vec_of(decl, "normal"), num_of(decl, "offset", 0.0));
    if (kind == "ball") return make_ball(vec_of(decl, "center"), num_of(decl, "radius"));
    if (kind == "box") return make_box(vec_of(decl, "lo"), vec_of(decl, "hi"));
    if (kind == "segment") return make_segment(vec_of(decl, "p"), vec_of(decl, "q"));
    if (kind == "point") return make_point(vec_of(decl, "p"));
    if (kind == "full") return make_full_space(int_of(decl, "dim"));
    if (kind == "empty") return make_empty_set(int_of(decl, "dim"));
    if (kind == "complement") {
      if (!decl.contains("of")) bad("complement needs 'of'");
      return complement(build_fixture(decl.at("of")));
    }
    if (kind == "union" || kind == "intersection") {
      if (!decl.contains("of") || !decl.at("of").is_array() || decl.at("of").size() < 2)
        bad(kind + " needs an array 'of' with at least two members");
      ImplicitSet acc = build_fixture(decl.at("of")[0]);
      for (std::size_t i = 1; i < decl.at("of").size(); ++i) {
        const ImplicitSet next = build_fixture(decl.at("of")[i]);
        acc = kind == "union" ? set_union(acc, next) : set_intersection(acc, next);
      }
      return acc;
    }
    if (kind == "cylinder") {
      if (!decl.contains("base")) bad("cylinder needs 'base'");
      return make_cylinder(build_fixture(decl.at("base")), int_of(decl, "dim"));
    }
    if (kind == "rotate") {
      if (!decl.contains("of")) bad("rotate needs 'of'");
      return rotate(build_fixture(decl.at("of")), vec_of(decl, "matrix"));
    }
    if (kind == "path_event") {
      if (!decl.contains("domain")) bad("path_event needs 'domain'");
      return path_event_set(build_domain(decl.at("domain")), int_of(decl, "level"));
    }
  } catch (const ContractError& e) {
    bad("fixture '" + kind + "': " + e.what());
  }
  bad("unknown fixture kind '" + kind + "'");
}

DomainSpec build_domain(const Json& decl) {
  std::optional<double> radius;
  if (decl.contains("exterior_ball_radius")) radius = num_of(decl, "exterior_ball_radius");
  try {
    return DomainSpec(build_domain_set(decl), radius);
  } catch (const ContractError& e) {
    bad(std::string("domain: ") + e.what());
  }
}

}  // namespace gpm::harness
