#include "gpm/harness/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gpm/boundary.hpp"
#include "gpm/dual_perimeter.hpp"
#include "gpm/errors.hpp"
#include "gpm/hausdorff.hpp"
#include "gpm/rng.hpp"
#include "gpm/slicing.hpp"
#include "gpm/wiener.hpp"

namespace gpm::harness {

namespace {

enum SeedTag : std::uint64_t {
  kDualTag = 1,
  kCloudTag = 2,
  kClassifyTag = 3,
  kRhoTag = 4,
  kFieldTag = 5,
  kAdmissibleTag = 6,
  kResidualTag = 7,
  kGroupTag = 100,
};

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

std::string pct(double tol) { return std::to_string(tol * 100.0).substr(0, 5) + "%"; }

/// Relative tolerance around a target; zero targets use "abs_tolerance".
double tolerance_for(const ExperimentConfig& cfg, double target) {
  if (target == 0.0) return cfg.params.value("abs_tolerance", 0.0);
  return cfg.tolerance * std::abs(target);
}

void apply_expectations(const ExperimentConfig& cfg, ResultRecord& rec) {
  if (!cfg.params.contains("expect")) return;
  for (const auto& [key, target] : cfg.params.at("expect").items()) {
    const Output* out = rec.find(key);
    if (!out) bad("'expect' names unknown output '" + key + "'");
    if (!target.is_number()) bad("'expect." + key + "' must be a number");
    const double t = target.get<double>();
    const double tol = tolerance_for(cfg, t);
    rec.check_near(key + " matches target", out->value, t, tol,
                   t == 0.0 ? "|observed - target| <= abs_tolerance"
                            : "|observed - target| <= " + pct(cfg.tolerance) + " of |target|");
  }
}

SliceBudget slice_budget(const Budget& b) { return {b.slices, std::min(b.quadrature_order, 32), 4000}; }

PointCloud points_from(const Json& src, const ImplicitSet& set, const ExperimentConfig& cfg, std::uint64_t seed) {
  const std::string kind = src.value("source", "bisection");
  const int m = set.dim();
  if (kind == "explicit") {
    if (!src.contains("points") || !src.at("points").is_array() || src.at("points").empty())
      bad("explicit point source needs a nonempty 'points' array");
    PointCloud cloud{m, {}, CloudProvenance::assembled};
    for (const Json& p : src.at("points")) {
      if (!p.is_array() || static_cast<int>(p.size()) != m) bad("explicit points must have the fixture dimension");
      for (const Json& v : p) cloud.points.push_back(v.get<double>());
    }
    return cloud;
  }
  const std::size_t count = src.value("count", cfg.budget.cloud_points);
  if (count == 0) bad("point source count must be positive");
  if (kind == "chart") {
    const ImplicitSet from = src.contains("fixture") ? build_fixture(src.at("fixture")) : set;
    if (from.dim() != m) bad("chart point source dimension differs from the fixture");
    return chart_cloud(from, count, seed, src.value("corners", false));
  }
  if (kind == "segment") {
    const Json& p = src.at("p");
    const Json& q = src.at("q");
    if (static_cast<int>(p.size()) != m || static_cast<int>(q.size()) != m) bad("segment source dimension mismatch");
    double t0 = 0.0, t1 = 1.0;
    if (src.contains("t_range")) {
      t0 = src.at("t_range")[0].get<double>();
      t1 = src.at("t_range")[1].get<double>();
    }
    PointCloud cloud{m, {}, CloudProvenance::assembled};
    for (std::size_t i = 0; i < count; ++i) {
      const double t = t0 + (t1 - t0) * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      for (int d = 0; d < m; ++d)
        cloud.points.push_back((1.0 - t) * p[static_cast<std::size_t>(d)].get<double>() +
                               t * q[static_cast<std::size_t>(d)].get<double>());
    }
    return cloud;
  }
  if (kind == "bisection") return boundary_cloud(set, count, seed, src.value("tol", 1e-12));
  bad("unknown point source '" + kind + "'");
}

void task_perimeter(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  const PerimeterEstimate dual = optimize_dual_field(set, cfg.budget.dual(derive_seed(cfg.seed, kDualTag))).estimate;
  rec.add_output("dual", dual.value, dual.std_error);
  if (set.has_charts() && !set.charts().empty()) {
    const PerimeterEstimate q = surface_perimeter_oracle(set, cfg.budget.quadrature_order);
    rec.add_output("quadrature", q.value, q.std_error);
  }
}

void task_hausdorff(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  PointCloud cloud = points_from(cfg.params.value("cloud", Json{{"source", "bisection"}}), set, cfg,
                                 derive_seed(cfg.seed, kCloudTag));
  if (cfg.params.value("restrict_to_mt_boundary", false)) {
    const auto classes = classify_cloud(set, cloud, cfg.budget.classifier(), derive_seed(cfg.seed, kClassifyTag));
    rec.add_output("cloud_points_before_restriction", static_cast<double>(cloud.size()));
    cloud = filter_cloud(cloud, classes, BoundaryClass::MTBoundary);
    if (cloud.size() == 0) throw DegenerateSetError("no cloud point classified MTBoundary");
  }
  Vec schedule;
  if (cfg.params.contains("schedule")) {
    for (const Json& e : cfg.params.at("schedule")) schedule.push_back(e.get<double>());
  } else {
    schedule = default_schedule(cloud);
  }
  const CoveringProfile prof = covering_profile(cloud, schedule);
  const HausdorffEstimate s = prof.spherical_estimate();
  const HausdorffEstimate g = prof.gauss_estimate();
  rec.add_output("cloud_size", static_cast<double>(cloud.size()));
  rec.add_output("finest_epsilon", schedule.back());
  rec.add_output("spherical_hausdorff", s.value);
  rec.add_output("spherical_trend", s.trend);
  rec.add_output("hausdorff_gauss", g.value);
  rec.add_output("gauss_trend", g.trend);
  if (set.has_charts() && !set.charts().empty()) {
    const PerimeterEstimate q = hausdorff_gauss(set, cfg.budget.quadrature_order);
    rec.add_output("hausdorff_gauss_quadrature", q.value, q.std_error);
  }
  if (cfg.params.value("dump_csv", false) && !cfg.output.empty()) {
    std::filesystem::create_directories(cfg.output);
    const std::string stem = cfg.output + "/" + (cfg.name.empty() ? cfg.task : cfg.name);
    std::ofstream c(stem + "_cloud.csv");
    write_cloud_csv(c, cloud);
    std::ofstream v(stem + "_covering.csv");
    write_covering_csv(v, greedy_cover(cloud, schedule.back()));
  }
}

void task_classify(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  const ClassifierBudget budget = cfg.budget.classifier();
  std::size_t g = 0;
  for (const Json& group : cfg.params.at("groups")) {
    const std::string name = group.value("name", "group" + std::to_string(g));
    const std::uint64_t gseed = derive_seed(cfg.seed, kGroupTag + g);
    const PointCloud pts = points_from(group.value("points", Json{{"source", "bisection"}}), set, cfg, gseed);
    std::vector<DensityProfile> profiles;
    std::vector<Classification> classes;
    std::size_t counts[4] = {0, 0, 0, 0};
    std::size_t topological = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto x = pts.point(i);
      profiles.push_back(
          density_profile(set, x, budget.j_min, budget.j_max, budget.samples_per_radius, derive_seed(gseed, i)));
      classes.push_back(classify(profiles.back(), budget.delta));
      ++counts[static_cast<int>(classes.back().cls)];
      // In the topological boundary: the finest ball meets the side x is not on.
      const double f = profiles.back().in_fraction.back();
      topological += set.contains(x) ? (f < 1.0) : (f > 0.0);
    }
    const double n = static_cast<double>(pts.size());
    rec.add_output(name + ".points", n);
    for (BoundaryClass c : {BoundaryClass::FullDensity, BoundaryClass::NullDensity, BoundaryClass::MTBoundary,
                            BoundaryClass::Indeterminate}) {
      rec.add_output(name + ".fraction_" + to_string(c), static_cast<double>(counts[static_cast<int>(c)]) / n);
    }
    rec.add_output(name + ".topological_boundary_fraction", static_cast<double>(topological) / n);
    if (group.contains("expect_class")) {
      const std::string cls = group.at("expect_class").get<std::string>();
      const Output* out = rec.find(name + ".fraction_" + cls);
      if (!out) bad("unknown boundary class '" + cls + "'");
      const double min_fraction = group.value("min_fraction", 1.0);
      rec.check_at_least(name + ": fraction classified " + cls, out->value, min_fraction,
                         "fraction >= " + std::to_string(min_fraction));
    }
    if (group.value("expect_topological_boundary", false)) {
      rec.check_at_least(name + ": all points in the topological boundary",
                         static_cast<double>(topological) / n, 1.0, "fraction >= 1");
    }
    if (cfg.params.value("dump_csv", false) && !cfg.output.empty()) {
      std::filesystem::create_directories(cfg.output);
      std::ofstream csv(cfg.output + "/" + (cfg.name.empty() ? cfg.task : cfg.name) + "_" + name + ".csv");
      write_classification_csv(csv, profiles, classes);
    }
    ++g;
  }
}

void task_rho(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  std::vector<int> ks;
  for (const Json& k : cfg.params.at("ks")) ks.push_back(k.get<int>());
  const SliceBudget sb = slice_budget(cfg.budget);
  const std::uint64_t seed = derive_seed(cfg.seed, kRhoTag);
  std::vector<SliceEstimate> est;
  if (cfg.params.contains("target_region")) {
    const ImplicitSet target = build_fixture(cfg.params.at("target_region"));
    for (int k : ks) est.push_back(rho_F(set, k, sb, derive_seed(seed, static_cast<std::uint64_t>(k)), target));
  } else {
    const RhoLimitReport report = rho_limit(set, ks, cfg.params.value("convergence_tol", 0.01), sb, seed);
    est = report.estimates;
    rec.add_output("converged", report.converged ? 1.0 : 0.0);
  }
  for (const SliceEstimate& e : est) rec.add_output("rho_k" + std::to_string(e.k), e.value, e.std_error);
  for (std::size_t i = 0; i < est.size(); ++i) {
    for (std::size_t j = i + 1; j < est.size(); ++j) {
      rec.check_at_most("rho_k" + std::to_string(est[i].k) + " <= rho_k" + std::to_string(est[j].k),
                        est[i].value - est[j].value,
                        ordering_slack({est[i].value, est[i].std_error}, {est[j].value, est[j].std_error}),
                        "value(k) - value(k') <= 2 (stderr(k) + stderr(k')) + 1e-9 relative");
    }
  }
}

void task_slice_identity(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  SliceIdentityOptions opt;
  opt.full = cfg.budget.dual(cfg.seed);
  const Json per = cfg.params.value("per_slice", Json::object());
  opt.per_slice.samples = per.value("samples", std::size_t{4000});
  opt.per_slice.iterations = per.value("iterations", 40);
  opt.per_slice.degree = per.value("degree", 3);
  opt.slices = cfg.params.value("identity_slices", std::size_t{400});
  const SliceIdentity r = slice_perimeter_identity(set, cfg.params.at("k").get<int>(), opt, cfg.seed);
  rec.add_output("lhs", r.lhs, r.lhs_std_error);
  rec.add_output("rhs", r.rhs, r.rhs_std_error);
  rec.add_output("residual", r.residual, r.std_error);
  rec.check_at_most("|lhs - rhs| within 2 stderr", std::abs(r.residual), 2.0 * r.std_error,
                    "|residual| <= 2 combined stderr");
}

void task_wiener(const ExperimentConfig& cfg, ResultRecord& rec) {
  const DomainSpec domain = build_domain(cfg.params.at("domain"));
  std::vector<int> levels;
  for (const Json& l : cfg.params.at("levels")) levels.push_back(l.get<int>());
  const GrowthReport g = perimeter_growth(domain, levels, cfg.budget.dual(cfg.seed), cfg.seed);
  for (std::size_t i = 0; i < levels.size(); ++i)
    rec.add_output("perimeter_L" + std::to_string(levels[i]), g.estimates[i].value, g.estimates[i].std_error);
  rec.check_at_least("all perimeter estimates finite", g.all_finite ? 1.0 : 0.0, 1.0, "finite value and stderr");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const PerimeterEstimate& a = g.estimates[i - 1];
    const PerimeterEstimate& b = g.estimates[i];
    rec.check_at_most("L" + std::to_string(levels[i - 1]) + " <= L" + std::to_string(levels[i]), a.value - b.value,
                      ordering_slack({a.value, a.std_error}, {b.value, b.std_error}),
                      "value(L) - value(L') <= 2 (stderr(L) + stderr(L')) + 1e-9 relative");
  }
}

void task_main_theorem(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  const PerimeterEstimate dual = optimize_dual_field(set, cfg.budget.dual(derive_seed(cfg.seed, kDualTag))).estimate;
  const PerimeterEstimate quad = surface_perimeter_oracle(set, cfg.budget.quadrature_order);
  PointCloud cloud = boundary_cloud(set, cfg.budget.cloud_points, derive_seed(cfg.seed, kCloudTag), 1e-12);
  const auto classes = classify_cloud(set, cloud, cfg.budget.classifier(), derive_seed(cfg.seed, kClassifyTag));
  cloud = filter_cloud(cloud, classes, BoundaryClass::MTBoundary);
  if (cloud.size() == 0) throw DegenerateSetError("no cloud point classified MTBoundary");
  const HausdorffEstimate cover = hausdorff_gauss(cloud, default_schedule(cloud));
  std::vector<int> ks;
  if (cfg.params.contains("ks")) {
    for (const Json& k : cfg.params.at("ks")) ks.push_back(k.get<int>());
  } else {
    for (int k = 1; k <= set.dim(); ++k) ks.push_back(k);
  }
  const RhoLimitReport rho = rho_limit(set, ks, cfg.params.value("convergence_tol", 0.01), slice_budget(cfg.budget),
                                       derive_seed(cfg.seed, kRhoTag));

  rec.add_output("dual", dual.value, dual.std_error);
  rec.add_output("quadrature", quad.value, quad.std_error);
  rec.add_output("covering_mt_boundary", cover.value);
  rec.add_output("mt_boundary_points", static_cast<double>(cloud.size()));
  rec.add_output("rho_limit", rho.value, rho.estimates.back().std_error);
  rec.add_output("rho_converged", rho.converged ? 1.0 : 0.0);

  const double target = cfg.params.value("target", quad.value);
  const double tol = cfg.tolerance * std::abs(target);
  const std::string rule = "|a - b| <= " + pct(cfg.tolerance) + " of target";
  const std::pair<const char*, double> values[] = {
      {"dual", dual.value}, {"quadrature", quad.value}, {"covering_mt_boundary", cover.value}, {"rho_limit", rho.value}};
  for (std::size_t i = 0; i < std::size(values); ++i) {
    rec.check_near(std::string(values[i].first) + " matches target", values[i].second, target, tol, rule);
    for (std::size_t j = i + 1; j < std::size(values); ++j) {
      rec.check_near(std::string(values[i].first) + " agrees with " + values[j].first, values[i].second - values[j].second,
                     0.0, tol, rule);
    }
  }
}

void task_gauss_green(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  const Json decl = cfg.params.value("field", Json::object());
  const int degree = decl.value("degree", 1);
  TestField raw(set.dim(), degree, set.dim(), NormControl::none);
  if (decl.contains("coefficients")) {
    const Json& c = decl.at("coefficients");
    if (c.size() != raw.coefficients().size())
      bad("field.coefficients needs " + std::to_string(raw.coefficients().size()) + " entries");
    for (std::size_t i = 0; i < c.size(); ++i) raw.coefficients()[i] = c[i].get<double>();
  } else {
    CounterRng rng(derive_seed(cfg.seed, kFieldTag), 0);
    for (double& c : raw.coefficients()) c = rng.normal();
  }
  const TestField field = make_admissible(raw, cfg.budget.samples, derive_seed(cfg.seed, kAdmissibleTag));
  const GaussGreenResidual r = gauss_green_residual(set, field, cfg.budget.samples,
                                                    derive_seed(cfg.seed, kResidualTag), cfg.budget.quadrature_order);
  rec.add_output("lhs", r.lhs, r.lhs_std_error);
  rec.add_output("rhs", r.rhs, r.rhs_error);
  rec.add_output("residual", r.residual, r.std_error);
  rec.check_at_most("|lhs - rhs| within 2 stderr", std::abs(r.residual), 2.0 * r.std_error,
                    "|residual| <= 2 combined stderr");
}

void task_convex_audit(const ExperimentConfig& cfg, const ImplicitSet& set, ResultRecord& rec) {
  const ConvexAudit a = convex_boundary_audit(set, cfg.budget.boundary_points, cfg.budget.classifier(), cfg.seed);
  rec.add_output("mt_boundary_fraction", a.fraction);
  rec.add_output("points", static_cast<double>(a.points));
  rec.add_output("indeterminate", static_cast<double>(a.indeterminate));
  if (cfg.params.contains("min_fraction")) {
    const double bound = cfg.params.at("min_fraction").get<double>();
    rec.check_at_least("MTBoundary fraction", a.fraction, bound, "fraction >= " + std::to_string(bound));
  }
}

void task_unit_ball_volume(const ExperimentConfig& cfg, ResultRecord& rec) {
  for (const Json& n : cfg.params.at("ns")) {
    const int k = n.get<int>();
    rec.add_output("V_" + std::to_string(k), unit_ball_volume(k));
  }
}

}  // namespace

ResultRecord run(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  rec.version = artifact_version();
  rec.config_digest = config_digest(cfg);
  rec.task = cfg.task;
  rec.name = cfg.name;
  rec.seed = cfg.seed;

  if (cfg.task == "wiener") {
    task_wiener(cfg, rec);
  } else if (cfg.task == "unit-ball-volume") {
    task_unit_ball_volume(cfg, rec);
  } else {
    const ImplicitSet set = build_fixture(cfg.fixture);
    if (cfg.task == "perimeter") task_perimeter(cfg, set, rec);
    else if (cfg.task == "hausdorff-gauss") task_hausdorff(cfg, set, rec);
    else if (cfg.task == "classify") task_classify(cfg, set, rec);
    else if (cfg.task == "rho") task_rho(cfg, set, rec);
    else if (cfg.task == "slice-identity") task_slice_identity(cfg, set, rec);
    else if (cfg.task == "verify-main-theorem") task_main_theorem(cfg, set, rec);
    else if (cfg.task == "gauss-green") task_gauss_green(cfg, set, rec);
    else if (cfg.task == "convex-audit") task_convex_audit(cfg, set, rec);
    else bad("unknown task '" + cfg.task + "'");
  }
  apply_expectations(cfg, rec);
  rec.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (cfg.params.contains("max_wall_clock_s")) {
    rec.check_at_most("runtime", rec.wall_clock_s, cfg.params.at("max_wall_clock_s").get<double>(),
                      "wall clock seconds <= bound");
  }
  return rec;
}

void persist(const std::vector<ResultRecord>& records, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string jsonl = dir + "/results.jsonl";
  const std::string csv = dir + "/summary.csv";
  const bool fresh_csv = !std::filesystem::exists(csv);
  std::ofstream out(jsonl, std::ios::app);
  std::ofstream sum(csv, std::ios::app);
  if (!out || !sum) throw Error("cannot write results under '" + dir + "'");
  for (const ResultRecord& r : records) write_json_line(out, r);
  write_summary_csv(sum, records, fresh_csv);
}

}  // namespace gpm::harness
