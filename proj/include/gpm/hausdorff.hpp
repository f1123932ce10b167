#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gpm/dual_perimeter.hpp"
#include "gpm/set_model.hpp"

namespace gpm {

enum class CloudProvenance { chart_sampled, bisection, assembled };

/// Points on a target surface, row-major.
struct PointCloud {
  int dim = 0;
  Vec points;
  CloudProvenance provenance = CloudProvenance::assembled;

  std::size_t size() const { return dim > 0 ? points.size() / static_cast<std::size_t>(dim) : 0; }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  void append(std::span<const double> x) { points.insert(points.end(), x.begin(), x.end()); }
};

/// Union of two clouds in the same space.
PointCloud merge_clouds(const PointCloud& a, const PointCloud& b);

struct CoverBall {
  Vec center;
  double diameter = 0.0;
};

struct Covering {
  double epsilon = 0.0;
  std::vector<CoverBall> balls;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Greedy cover by balls of diameter below epsilon, each centered on a cloud
/// point. Components of the epsilon-neighbourhood graph are covered one at a
/// time; inside a component the next ball starts at the uncovered point
/// nearest to the existing centers, is centered where it covers the most
/// uncovered points, and shrinks to the points it actually covers plus half
/// of each point's nearest-neighbour gap (gaps wider than epsilon count as 0).
Covering greedy_cover(const PointCloud& cloud, double epsilon);

/// sum_i V_s (d_i / 2)^s, optionally weighted by the Gaussian density at
/// the centers.
double covering_sum(const Covering& cover, int s, bool gaussian_weight);

struct HausdorffEstimate {
  double value = 0.0;  // at the finest scale
  Vec epsilons;
  Vec values;
  /// Richardson-style extrapolation 2 V(eps_min) - V(2 eps_min) when the
  /// schedule contains that pair, otherwise the last difference.
  double trend = 0.0;
  std::size_t cloud_size = 0;
};

/// Median nearest-neighbour distance (0 for fewer than two points).
double median_nn_distance(const PointCloud& cloud);

/// eps_j = eps_0 2^{-j}, j = 0..5, with eps_0 = 4096 times the median
/// nearest-neighbour distance.
Vec default_schedule(const PointCloud& cloud);

/// Both covering sums along a schedule, from one greedy cover per scale.
struct CoveringProfile {
  Vec epsilons;
  Vec spherical;  // sum V_{m-1} (d/2)^{m-1}
  Vec weighted;   // same, times the Gaussian density at each center
  std::size_t cloud_size = 0;

  HausdorffEstimate spherical_estimate() const;
  HausdorffEstimate gauss_estimate() const;
};

/// Throws ResolutionError if the median point spacing exceeds the finest scale.
CoveringProfile covering_profile(const PointCloud& cloud, std::span<const double> schedule);

/// Spherical Hausdorff measure of dimension dim-1 along the schedule.
HausdorffEstimate spherical_hausdorff(const PointCloud& cloud, std::span<const double> schedule);

/// Gaussian-weighted version through the covering backend.
HausdorffEstimate hausdorff_gauss(const PointCloud& cloud, std::span<const double> schedule);

/// Gaussian-weighted version through chart quadrature.
PerimeterEstimate hausdorff_gauss(const ImplicitSet& set, int quadrature_order = 48);

/// Midpoints of bisected Gaussian pairs that straddle the boundary.
/// Returns fewer than n points if the attempt budget (200 n pairs) runs out.
PointCloud boundary_cloud(const ImplicitSet& set, std::size_t n, std::uint64_t seed, double tol);

/// Points drawn from the charts proportionally to surface area. With
/// `corners`, the images of every parameter-box corner are appended.
PointCloud chart_cloud(const ImplicitSet& set, std::size_t n, std::uint64_t seed, bool corners = false);

void write_cloud_csv(std::ostream& out, const PointCloud& cloud);
void write_covering_csv(std::ostream& out, const Covering& cover);

}  // namespace gpm
