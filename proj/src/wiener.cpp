#include "gpm/wiener.hpp"

#include <algorithm>
#include <cmath>

#include "gpm/errors.hpp"
#include "gpm/gaussian.hpp"
#include "gpm/hausdorff.hpp"
#include "gpm/kernels.hpp"
#include "gpm/rng.hpp"

namespace gpm {

namespace {

enum SeedTag : std::uint64_t { kPilotTag = 21, kPointsTag = 22, kClassifyTag = 23 };

/// Path values at t = i 2^-L, i = 1..2^L, written to out (row-major).
void grid_values(std::span<const double> coeffs, int level, int d, std::span<double> out) {
  const int n = 1 << level;
  const auto du = static_cast<std::size_t>(d);
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 1; i <= n; ++i) {
    const double t = std::ldexp(static_cast<double>(i), -level);
    const auto row = static_cast<std::size_t>(i - 1) * du;
    for (int b = 0; b < n; ++b) {
      const double s = schauder(b, t);
      if (s == 0.0) continue;
      for (std::size_t c = 0; c < du; ++c) out[row + c] += s * coeffs[static_cast<std::size_t>(b) * du + c];
    }
  }
}

class PathEvent final : public detail::Shape {
 public:
  PathEvent(DomainSpec domain, int level)
      : Shape((1 << level) * domain.omega.dim()), domain_(std::move(domain)), level_(level) {}

  bool contains(std::span<const double> x) const override {
    const int d = domain_.omega.dim();
    const int n = 1 << level_;
    Vec w(static_cast<std::size_t>(n * d));
    grid_values(x, level_, d, w);
    for (int i = 0; i < n; ++i) {
      if (!domain_.omega.contains(std::span<const double>(w.data() + i * d, static_cast<std::size_t>(d))))
        return false;
    }
    return true;
  }
  std::optional<bool> convex() const override {
    // Preimage of a product of convex sets under a linear map.
    const auto c = domain_.omega.convex_flag();
    if (c && *c) return true;
    return std::nullopt;
  }
  std::string describe() const override {
    return "path_event(omega=" + domain_.omega.describe() + ", level=" + std::to_string(level_) + ")";
  }

 private:
  DomainSpec domain_;
  int level_;
};

}  // namespace

PathDiscretization::PathDiscretization(int level_, int dim_) : level(level_), dim(dim_) {
  require(level >= 0 && level <= kMaxPathLevel, "PathDiscretization: level outside [0, 4]");
  require(dim >= 1 && dim <= kMaxPathDim, "PathDiscretization: spatial dimension outside [1, 2]");
}

double schauder(int index, double t) {
  require(index >= 0, "schauder: negative index");
  if (index == 0) return t;
  int n = 0;
  while ((2 << n) <= index) ++n;
  const int i = index - (1 << n);
  const double width = std::ldexp(1.0, -n);
  const double lo = i * width;
  const double x = t - lo;
  if (x <= 0.0 || x >= width) return 0.0;
  const double peak = std::ldexp(1.0, -1) / std::sqrt(std::ldexp(1.0, n));
  return peak * (1.0 - std::abs(2.0 * x / width - 1.0));
}

Vec brownian_from_coeffs(std::span<const double> coeffs, const PathDiscretization& disc,
                         std::span<const double> t_grid) {
  require_dim(coeffs.size(), static_cast<std::size_t>(disc.coefficient_dim()), "brownian_from_coeffs");
  const auto d = static_cast<std::size_t>(disc.dim);
  const int n = disc.intervals();
  Vec out(t_grid.size() * d, 0.0);
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    const double scaled = std::ldexp(t, disc.level);
    if (!(t >= 0.0 && t <= 1.0) || std::abs(scaled - std::round(scaled)) > 1e-12) {
      throw ContractError("brownian_from_coeffs: t = " + std::to_string(t) + " is not a dyadic point of level " +
                          std::to_string(disc.level));
    }
    for (int b = 0; b < n; ++b) {
      const double s = schauder(b, t);
      if (s == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) out[j * d + c] += s * coeffs[static_cast<std::size_t>(b) * d + c];
    }
  }
  return out;
}

DomainSpec::DomainSpec(ImplicitSet omega_, std::optional<double> radius)
    : omega(std::move(omega_)), exterior_ball_radius(radius) {
  require(omega.dim() >= 1 && omega.dim() <= kMaxPathDim, "DomainSpec: spatial dimension outside [1, 2]");
  const Vec origin(static_cast<std::size_t>(omega.dim()), 0.0);
  require(omega.contains(origin), "DomainSpec: the domain must contain the origin");
  require(!radius || *radius > 0.0, "DomainSpec: exterior ball radius must be positive");
}

ImplicitSet path_event_set(const DomainSpec& domain, int level) {
  const PathDiscretization disc(level, domain.omega.dim());
  return ImplicitSet(std::make_shared<PathEvent>(domain, disc.level));
}

GrowthReport perimeter_growth(const DomainSpec& domain, std::span<const int> levels, const DualOptions& options,
                              std::uint64_t seed) {
  require(!levels.empty(), "perimeter_growth: no levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    require(levels[i] > levels[i - 1], "perimeter_growth: levels must increase");
  GrowthReport report;
  for (int level : levels) {
    DualOptions opt = options;
    opt.seed = derive_seed(seed, static_cast<std::uint64_t>(level));
    const PerimeterEstimate est = optimize_dual_field(path_event_set(domain, level), opt).estimate;
    report.levels.push_back(level);
    report.estimates.push_back(est);
    report.all_finite = report.all_finite && std::isfinite(est.value) && std::isfinite(est.std_error);
  }
  for (std::size_t i = 1; i < report.estimates.size(); ++i) {
    const PerimeterEstimate& a = report.estimates[i - 1];
    const PerimeterEstimate& b = report.estimates[i];
    if (a.value - b.value > ordering_slack({a.value, a.std_error}, {b.value, b.std_error}))
      report.nondecreasing = false;
  }
  return report;
}

ConvexAudit convex_boundary_audit(const ImplicitSet& set, std::size_t n_points, const ClassifierBudget& budget,
                                  std::uint64_t seed) {
  const auto flag = set.convex_flag();
  require(flag.has_value() && *flag, "convex_boundary_audit: set is not flagged convex");
  require(n_points >= 1, "convex_boundary_audit: need at least one point");
  {
    const SampleBatch pilot = sample(GaussianSpace(set.dim()), 4096, derive_seed(seed, kPilotTag));
    const auto flags = kernels::parallel::membership(set, pilot);
    if (std::count(flags.begin(), flags.end(), 1) == 0)
      throw UnsupportedError("convex_boundary_audit: set has empty interior on the pilot sample");
  }
  ConvexAudit audit;
  const std::uint64_t point_seed = derive_seed(seed, kPointsTag);
  if (set.has_charts() && !set.charts().empty()) {
    audit.cloud = chart_cloud(set, n_points, point_seed, true);
  } else {
    audit.cloud = boundary_cloud(set, n_points, point_seed, 1e-12);
  }
  audit.classes = classify_cloud(set, audit.cloud, budget, derive_seed(seed, kClassifyTag));
  audit.points = audit.classes.size();
  for (BoundaryClass c : audit.classes) {
    audit.boundary += c == BoundaryClass::MTBoundary ? 1 : 0;
    audit.indeterminate += c == BoundaryClass::Indeterminate ? 1 : 0;
  }
  audit.fraction = audit.points ? static_cast<double>(audit.boundary) / static_cast<double>(audit.points) : 0.0;
  return audit;
}

}  // namespace gpm
