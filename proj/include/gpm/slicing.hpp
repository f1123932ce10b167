#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpm/dual_perimeter.hpp"
#include "gpm/set_model.hpp"

namespace gpm {

enum class SliceBackend { crossings, quadrature, covering };

std::string to_string(SliceBackend backend);

/// Monte Carlo over tails y of the Gaussian-weighted (k-1)-dimensional
/// boundary measure of the sections A_y.
struct SliceEstimate {
  int k = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t slices_used = 0;
  std::size_t empty_slices = 0;  // sections with no boundary
  SliceBackend backend = SliceBackend::crossings;
};

struct SliceBudget {
  std::size_t slices = 4000;
  int quadrature_order = 32;     // per-axis order for charted sections
  std::size_t cloud_points = 4000;  // boundary cloud size for chartless sections
};

/// Sum of the 1-D Gaussian density over the boundary points of a subset of
/// R found by a 2^10-point scan of [-8, 8] and 64 bisection steps. If
/// `keep` is given, only crossings x with keep(x) count.
double crossing_mass(const ImplicitSet& slice, const std::function<bool(double)>& keep = {});

/// rho_{F_k}(A restricted to the target B, when given).
SliceEstimate rho_F(const ImplicitSet& set, int k, const SliceBudget& budget, std::uint64_t seed,
                    const std::optional<ImplicitSet>& target = std::nullopt);

struct RhoLimitReport {
  std::vector<SliceEstimate> estimates;
  Vec increments;
  double value = 0.0;
  bool converged = false;
  bool monotonicity_violation = false;
  std::string diagnostic;
};

/// Runs rho_F along an increasing k schedule. Converged when the last two
/// increments are below tol + 2 stderr; a drop beyond 2 stderr is flagged
/// as a monotonicity violation (estimator bias), not thrown.
RhoLimitReport rho_limit(const ImplicitSet& set, std::span<const int> ks, double tol, const SliceBudget& budget,
                         std::uint64_t seed);

struct PairCheck {
  int k_lo = 0;
  int k_hi = 0;
  double drop = 0.0;       // value(k_lo) - value(k_hi)
  double tolerance = 0.0;  // 2 (stderr_lo + stderr_hi)
  bool pass = false;
};

struct MonotonicityReport {
  std::vector<SliceEstimate> rows;
  std::vector<PairCheck> checks;
  bool all_pass = true;
};

MonotonicityReport monotonicity_report(const ImplicitSet& set, std::span<const int> ks, const SliceBudget& budget,
                                       std::uint64_t seed);

struct SliceIdentityOptions {
  DualOptions full;        // field on R^m pointing along the head coordinates
  DualOptions per_slice;   // field on each k-dimensional section
  std::size_t slices = 400;
};

struct SliceIdentity {
  double lhs = 0.0;
  double lhs_std_error = 0.0;
  double rhs = 0.0;
  double rhs_std_error = 0.0;
  double residual = 0.0;
  double std_error = 0.0;
};

/// Dual perimeter of A with head-only fields against the Monte Carlo
/// average of the dual perimeters of its k-dimensional sections.
SliceIdentity slice_perimeter_identity(const ImplicitSet& set, int k, const SliceIdentityOptions& options,
                                       std::uint64_t seed);

}  // namespace gpm
