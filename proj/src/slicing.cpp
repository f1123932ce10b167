#include "gpm/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>

#include "gpm/errors.hpp"
#include "gpm/gaussian.hpp"
#include "gpm/hausdorff.hpp"
#include "gpm/rng.hpp"
#include "gpm/stats.hpp"

namespace gpm {

namespace {

constexpr int kScanPoints = 1 << 10;
constexpr int kBisections = 64;

enum SeedTag : std::uint64_t { kTailTag = 11, kCloudTag = 12, kLhsTag = 13, kSliceTag = 14 };

/// Boundary mass of one section and the backend that produced it.
double slice_mass(const ImplicitSet& slice, std::span<const double> tail, const SliceBudget& budget,
                  std::uint64_t seed, const std::optional<ImplicitSet>& target, SliceBackend& backend) {
  const int k = slice.dim();
  if (k == 1) {
    backend = SliceBackend::crossings;
    if (!target) return crossing_mass(slice);
    return crossing_mass(slice, [&](double x) {
      const double xs[1] = {x};
      return target->contains(concat(xs, tail));
    });
  }
  if (slice.has_charts()) {
    backend = SliceBackend::quadrature;
    return integrate_charts(slice.charts(), budget.quadrature_order,
                            [&](std::span<const double> x, std::span<const double>) {
                              if (target && !target->contains(concat(x, tail))) return 0.0;
                              return gaussian_density(x);
                            });
  }
  backend = SliceBackend::covering;
  PointCloud cloud;
  try {
    cloud = boundary_cloud(slice, budget.cloud_points, derive_seed(seed, kCloudTag), 1e-10);
  } catch (const DegenerateSetError&) {
    return 0.0;
  }
  if (target) {
    PointCloud kept{cloud.dim, {}, cloud.provenance};
    for (std::size_t i = 0; i < cloud.size(); ++i)
      if (target->contains(concat(cloud.point(i), tail))) kept.append(cloud.point(i));
    if (kept.size() == 0) return 0.0;
    cloud = std::move(kept);
  }
  const Vec schedule = default_schedule(cloud);
  return hausdorff_gauss(cloud, schedule).value;
}

}  // namespace

std::string to_string(SliceBackend backend) {
  switch (backend) {
    case SliceBackend::crossings: return "crossings";
    case SliceBackend::quadrature: return "quadrature";
    case SliceBackend::covering: return "covering";
  }
  return "unknown";
}

double crossing_mass(const ImplicitSet& slice, const std::function<bool(double)>& keep) {
  require(slice.dim() == 1, "crossing_mass: section must be one-dimensional");
  const double lo = -kChartHalfWidth, hi = kChartHalfWidth;
  const double step = (hi - lo) / (kScanPoints - 1);
  auto in = [&slice](double x) {
    const double xs[1] = {x};
    return slice.contains(xs);
  };
  double total = 0.0;
  double prev_x = lo;
  bool prev_in = in(prev_x);
  for (int i = 1; i < kScanPoints; ++i) {
    const double x = lo + step * i;
    const bool now_in = in(x);
    if (now_in != prev_in) {
      double a = prev_x, b = x;  // in(a) == prev_in
      for (int it = 0; it < kBisections; ++it) {
        const double mid = 0.5 * (a + b);
        (in(mid) == prev_in ? a : b) = mid;
      }
      const double c = 0.5 * (a + b);
      if (!keep || keep(c)) total += std::exp(-0.5 * c * c) / std::sqrt(2.0 * std::numbers::pi);
    }
    prev_x = x;
    prev_in = now_in;
  }
  return total;
}

SliceEstimate rho_F(const ImplicitSet& set, int k, const SliceBudget& budget, std::uint64_t seed,
                    const std::optional<ImplicitSet>& target) {
  const int m = set.dim();
  require(k >= 1 && k <= m, "rho_F: need 1 <= k <= m");
  require(budget.slices >= 1, "rho_F: need at least one slice");
  if (target) require(target->dim() == m, "rho_F: target dimension mismatch");
  SliceEstimate est;
  est.k = k;
  const CoordinateSplit split(m, k);

  if (k == m) {
    // A single deterministic slice: the set itself.
    est.slices_used = 1;
    est.value = slice_mass(set, {}, budget, seed, target, est.backend);
    est.empty_slices = est.value == 0.0 ? 1 : 0;
    if (est.backend == SliceBackend::quadrature) {
      const double finer = integrate_charts(set.charts(), (3 * budget.quadrature_order + 1) / 2,
                                            [&](std::span<const double> x, std::span<const double>) {
                                              if (target && !target->contains(x)) return 0.0;
                                              return gaussian_density(x);
                                            });
      est.std_error = std::abs(finer - est.value);
    }
    return est;
  }

  const SampleBatch tails = sample(GaussianSpace(m - k), budget.slices, derive_seed(seed, kTailTag));
  Vec values(budget.slices);
  std::vector<SliceBackend> backends(budget.slices, SliceBackend::crossings);
  const auto n = static_cast<std::ptrdiff_t>(budget.slices);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    try {
      const auto y = tails.point(iu);
      const ImplicitSet slice = section(set, {split, Vec(y.begin(), y.end())});
      values[iu] = slice_mass(slice, y, budget, derive_seed(seed, kSliceTag + 16 * iu), target, backends[iu]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  Moments mom;
  for (double v : values) mom.add(v);
  est.value = std::max(mom.mean(), 0.0);
  est.std_error = mom.std_error();
  est.slices_used = budget.slices;
  est.empty_slices = static_cast<std::size_t>(std::count(values.begin(), values.end(), 0.0));
  est.backend = *std::max_element(backends.begin(), backends.end());
  return est;
}

RhoLimitReport rho_limit(const ImplicitSet& set, std::span<const int> ks, double tol, const SliceBudget& budget,
                         std::uint64_t seed) {
  require(!ks.empty(), "rho_limit: empty k schedule");
  for (std::size_t i = 1; i < ks.size(); ++i) require(ks[i] > ks[i - 1], "rho_limit: schedule must increase");
  require(ks.back() <= set.dim(), "rho_limit: k exceeds the ambient dimension");
  RhoLimitReport report;
  for (int k : ks) report.estimates.push_back(rho_F(set, k, budget, derive_seed(seed, static_cast<std::uint64_t>(k))));
  std::vector<bool> small;
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const SliceEstimate& a = report.estimates[i - 1];
    const SliceEstimate& b = report.estimates[i];
    const double inc = b.value - a.value;
    const double noise = 2.0 * std::hypot(a.std_error, b.std_error);
    report.increments.push_back(inc);
    small.push_back(std::abs(inc) < tol + noise);
    if (inc < -(noise + 1e-9 * std::max(std::abs(a.value), std::abs(b.value)))) {
      report.monotonicity_violation = true;
      report.diagnostic += "rho decreases from k=" + std::to_string(ks[i - 1]) + " to k=" + std::to_string(ks[i]) +
                           " by " + std::to_string(-inc) + " (beyond 2 stderr = " + std::to_string(noise) + "); ";
    }
  }
  report.value = report.estimates.back().value;
  if (small.size() == 1) report.converged = small[0];
  if (small.size() >= 2) report.converged = small[small.size() - 1] && small[small.size() - 2];
  return report;
}

MonotonicityReport monotonicity_report(const ImplicitSet& set, std::span<const int> ks, const SliceBudget& budget,
                                       std::uint64_t seed) {
  MonotonicityReport report;
  for (int k : ks) report.rows.push_back(rho_F(set, k, budget, derive_seed(seed, static_cast<std::uint64_t>(k))));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t j = i + 1; j < ks.size(); ++j) {
      if (ks[i] >= ks[j]) continue;
      const SliceEstimate& lo = report.rows[i];
      const SliceEstimate& hi = report.rows[j];
      PairCheck c{ks[i], ks[j], lo.value - hi.value,
                  ordering_slack({lo.value, lo.std_error}, {hi.value, hi.std_error}), false};
      c.pass = c.drop <= c.tolerance;
      report.all_pass = report.all_pass && c.pass;
      report.checks.push_back(c);
    }
  }
  return report;
}

SliceIdentity slice_perimeter_identity(const ImplicitSet& set, int k, const SliceIdentityOptions& options,
                                       std::uint64_t seed) {
  const int m = set.dim();
  require(k >= 1 && k <= m, "slice_perimeter_identity: need 1 <= k <= m");
  require(options.slices >= 2 || k == m, "slice_perimeter_identity: need at least two slices");
  SliceIdentity out;

  DualOptions full = options.full;
  full.components = k;
  full.seed = derive_seed(seed, kLhsTag);
  const PerimeterEstimate lhs = optimize_dual_field(set, full).estimate;
  out.lhs = lhs.value;
  out.lhs_std_error = lhs.std_error;

  const CoordinateSplit split(m, k);
  if (k == m) {
    DualOptions one = options.per_slice;
    one.seed = derive_seed(seed, kSliceTag);
    const PerimeterEstimate r = optimize_dual_field(set, one).estimate;
    out.rhs = r.value;
    out.rhs_std_error = r.std_error;
  } else {
    const SampleBatch tails = sample(GaussianSpace(m - k), options.slices, derive_seed(seed, kTailTag));
    Moments mom;
    for (std::size_t i = 0; i < options.slices; ++i) {
      const auto y = tails.point(i);
      const ImplicitSet slice = section(set, {split, Vec(y.begin(), y.end())});
      DualOptions per = options.per_slice;
      per.seed = derive_seed(seed, kSliceTag + 16 * i);
      per.components = 0;
      mom.add(optimize_dual_field(slice, per).estimate.value);
    }
    out.rhs = mom.mean();
    out.rhs_std_error = mom.std_error();
  }
  out.residual = out.lhs - out.rhs;
  out.std_error = std::hypot(out.lhs_std_error, out.rhs_std_error);
  return out;
}

}  // namespace gpm
