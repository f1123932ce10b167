#include "gpm/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gpm/errors.hpp"
#include "gpm/kernels.hpp"
#include "gpm/rng.hpp"

namespace gpm {

namespace {

void check_window(int j_min, int j_max) {
  require(j_min <= j_max - 1, "density profile: need at least two radii");
  require(j_min >= -8 && j_max <= 60, "density profile: dyadic window out of range");
}

DensityProfile profile_with(const ImplicitSet& set, std::span<const double> x, int j_min, int j_max,
                            std::size_t n, std::uint64_t seed, bool parallel) {
  require_dim(x.size(), static_cast<std::size_t>(set.dim()), "density_profile");
  require(n >= 100, "density_profile: need at least 100 samples per radius");
  check_window(j_min, j_max);
  DensityProfile p;
  p.point.assign(x.begin(), x.end());
  p.samples_per_radius = n;
  p.seed = seed;
  for (int j = j_min; j <= j_max; ++j) {
    const double r = std::ldexp(1.0, -j);
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(j + 64));
    const std::size_t hits =
        parallel ? kernels::parallel::ball_hits(set, x, r, n, s) : kernels::serial::ball_hits(set, x, r, n, s);
    const double f = static_cast<double>(hits) / static_cast<double>(n);
    p.js.push_back(j);
    p.radii.push_back(r);
    p.in_fraction.push_back(f);
    p.std_error.push_back(std::sqrt(f * (1.0 - f) / static_cast<double>(n)));
  }
  return p;
}

}  // namespace

std::string to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::FullDensity: return "FullDensity";
    case BoundaryClass::NullDensity: return "NullDensity";
    case BoundaryClass::MTBoundary: return "MTBoundary";
    case BoundaryClass::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

DensityProfile density_profile(const ImplicitSet& set, std::span<const double> x, int j_min, int j_max,
                               std::size_t samples_per_radius, std::uint64_t seed) {
  return profile_with(set, x, j_min, j_max, samples_per_radius, seed, true);
}

Classification classify(const DensityProfile& profile, double delta) {
  const std::size_t n = profile.in_fraction.size();
  require(n >= 2, "classify: profile needs at least two radii");
  require(delta > 0.0 && delta < 0.5, "classify: delta must lie in (0, 1/2)");
  bool boundary = true, full = true, null = true;
  for (std::size_t i = n - 2; i < n; ++i) {
    const double p = profile.in_fraction[i];
    const double s2 = 2.0 * profile.std_error[i];
    boundary = boundary && std::min(p, 1.0 - p) >= delta + s2;
    full = full && (1.0 - p) + s2 < delta;
    null = null && p + s2 < delta;
  }
  Classification c;
  c.delta = delta;
  c.j_min = profile.js.front();
  c.j_max = profile.js.back();
  c.cls = boundary ? BoundaryClass::MTBoundary
          : full   ? BoundaryClass::FullDensity
          : null   ? BoundaryClass::NullDensity
                   : BoundaryClass::Indeterminate;
  return c;
}

Classification classify_point(const ImplicitSet& set, std::span<const double> x, const ClassifierBudget& budget,
                              std::uint64_t seed) {
  return classify(density_profile(set, x, budget.j_min, budget.j_max, budget.samples_per_radius, seed),
                  budget.delta);
}

std::vector<BoundaryClass> classify_cloud(const ImplicitSet& set, const PointCloud& cloud,
                                          const ClassifierBudget& budget, std::uint64_t seed) {
  require(cloud.dim == set.dim(), "classify_cloud: dimension mismatch");
  check_window(budget.j_min, budget.j_max);
  require(budget.samples_per_radius >= 100, "classify_cloud: need at least 100 samples per radius");
  std::vector<BoundaryClass> out(cloud.size());
  const auto n = static_cast<std::ptrdiff_t>(cloud.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const DensityProfile p = profile_with(set, cloud.point(iu), budget.j_min, budget.j_max,
                                          budget.samples_per_radius, derive_seed(seed, iu), false);
    out[iu] = classify(p, budget.delta).cls;
  }
  return out;
}

PointCloud filter_cloud(const PointCloud& cloud, std::span<const BoundaryClass> classes, BoundaryClass keep) {
  require_dim(classes.size(), cloud.size(), "filter_cloud");
  PointCloud out{cloud.dim, {}, cloud.provenance};
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (classes[i] == keep) out.append(cloud.point(i));
  return out;
}

Classification section_boundary_test(const ImplicitSet& set, std::span<const double> z, int k,
                                     const ClassifierBudget& budget, std::uint64_t seed) {
  const int m = set.dim();
  require_dim(z.size(), static_cast<std::size_t>(m), "section_boundary_test");
  require(k >= 1 && k <= m, "section_boundary_test: need 1 <= k <= m");
  const CoordinateSplit split(m, k);
  const ImplicitSet slice = section(set, {split, project_tail(split, z)});
  return classify_point(slice, project_head(split, z), budget, seed);
}

StabilizedResult stabilized_boundary_test(const ImplicitSet& set, std::span<const double> z, int k_min, int k_max,
                                          const ClassifierBudget& budget, std::uint64_t seed) {
  require(k_min >= 1 && k_min <= k_max && k_max <= set.dim(), "stabilized_boundary_test: bad k window");
  StabilizedResult r;
  bool all_boundary = true, indeterminate = false;
  for (int k = k_min; k <= k_max; ++k) {
    const BoundaryClass c =
        section_boundary_test(set, z, k, budget, derive_seed(seed, static_cast<std::uint64_t>(k))).cls;
    r.ks.push_back(k);
    r.per_k.push_back(c);
    indeterminate = indeterminate || c == BoundaryClass::Indeterminate;
    all_boundary = all_boundary && c == BoundaryClass::MTBoundary;
  }
  if (!indeterminate) r.in_boundary = all_boundary;
  return r;
}

void write_classification_csv(std::ostream& out, std::span<const DensityProfile> profiles,
                              std::span<const Classification> classes) {
  require_dim(classes.size(), profiles.size(), "write_classification_csv");
  if (profiles.empty()) return;
  const DensityProfile& first = profiles.front();
  for (std::size_t d = 0; d < first.point.size(); ++d) out << 'x' << d << ',';
  for (int j : first.js) out << "frac_j" << j << ',';
  out << "class,delta,seed\n";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (double v : profiles[i].point) out << v << ',';
    for (double f : profiles[i].in_fraction) out << f << ',';
    out << to_string(classes[i].cls) << ',' << classes[i].delta << ',' << profiles[i].seed << '\n';
  }
}

}  // namespace gpm
