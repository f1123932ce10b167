#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpm/boundary.hpp"
#include "gpm/dual_perimeter.hpp"
#include "gpm/set_model.hpp"

namespace gpm {

inline constexpr int kMaxPathLevel = 4;
inline constexpr int kMaxPathDim = 2;

/// Schauder truncation of Brownian motion on [0, 1] in R^d. Basis function
/// 0 is t; basis function 2^n + i (0 <= i < 2^n) is the hat supported on
/// [i 2^-n, (i+1) 2^-n] with peak 2^{-n/2-1}. Level L keeps the first 2^L
/// functions, so level L coefficients are a prefix of level L+1's.
/// Coefficients are stored basis-major: index b d + c for component c.
struct PathDiscretization {
  int level = 0;
  int dim = 1;

  PathDiscretization(int level, int dim);
  int intervals() const { return 1 << level; }
  int coefficient_dim() const { return intervals() * dim; }
};

double schauder(int index, double t);

/// Path values w(t) for each t in the grid, row-major (t, component).
/// Every t must be a dyadic point of the discretization's level.
Vec brownian_from_coeffs(std::span<const double> coeffs, const PathDiscretization& disc,
                         std::span<const double> t_grid);

/// Omega in R^d, required to contain the origin.
struct DomainSpec {
  ImplicitSet omega;
  std::optional<double> exterior_ball_radius;

  explicit DomainSpec(ImplicitSet omega, std::optional<double> exterior_ball_radius = std::nullopt);
};

/// { coefficients : w(i 2^-L) in Omega for i = 1..2^L } in R^{2^L d}.
ImplicitSet path_event_set(const DomainSpec& domain, int level);

struct GrowthReport {
  std::vector<int> levels;
  std::vector<PerimeterEstimate> estimates;
  bool all_finite = true;
  bool nondecreasing = true;  // consecutive drops within 2 (stderr sum)
};

GrowthReport perimeter_growth(const DomainSpec& domain, std::span<const int> levels, const DualOptions& options,
                              std::uint64_t seed);

struct ConvexAudit {
  double fraction = 0.0;  // MTBoundary share
  std::size_t points = 0;
  std::size_t boundary = 0;
  std::size_t indeterminate = 0;
  PointCloud cloud;
  std::vector<BoundaryClass> classes;
};

/// Classifies topological boundary points of a convex set: chart samples
/// plus chart corners when charts exist, bisection midpoints otherwise.
ConvexAudit convex_boundary_audit(const ImplicitSet& set, std::size_t n_points, const ClassifierBudget& budget,
                                  std::uint64_t seed);

}  // namespace gpm
