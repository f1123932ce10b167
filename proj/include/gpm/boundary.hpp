#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpm/hausdorff.hpp"
#include "gpm/set_model.hpp"

namespace gpm {

enum class BoundaryClass { FullDensity, NullDensity, MTBoundary, Indeterminate };

std::string to_string(BoundaryClass c);

/// Volume fractions of a set in the balls B(x, 2^{-j}), j = j_min..j_max.
struct DensityProfile {
  Vec point;
  std::vector<int> js;
  Vec radii;
  Vec in_fraction;
  Vec std_error;  // binomial
  std::size_t samples_per_radius = 0;
  std::uint64_t seed = 0;
};

struct ClassifierBudget {
  int j_min = 3;
  int j_max = 9;
  std::size_t samples_per_radius = 400;
  double delta = 0.01;
};

struct Classification {
  BoundaryClass cls = BoundaryClass::Indeterminate;
  double delta = 0.0;
  int j_min = 0;
  int j_max = 0;
};

/// Radius j uses the sample stream derive_seed(seed, j), so profiles over
/// different windows share their common radii.
DensityProfile density_profile(const ImplicitSet& set, std::span<const double> x, int j_min, int j_max,
                               std::size_t samples_per_radius, std::uint64_t seed);

/// Decision at the two finest radii, with p the in-fraction and s its
/// standard error at each: MTBoundary if min(p, 1-p) >= delta + 2s at both,
/// FullDensity if 1-p + 2s < delta at both, NullDensity if p + 2s < delta at
/// both, Indeterminate otherwise.
Classification classify(const DensityProfile& profile, double delta = 0.01);

Classification classify_point(const ImplicitSet& set, std::span<const double> x, const ClassifierBudget& budget,
                              std::uint64_t seed);

/// Classifies every cloud point; point i uses derive_seed(seed, i).
std::vector<BoundaryClass> classify_cloud(const ImplicitSet& set, const PointCloud& cloud,
                                          const ClassifierBudget& budget, std::uint64_t seed);

/// Points of the cloud whose class equals `keep`.
PointCloud filter_cloud(const PointCloud& cloud, std::span<const BoundaryClass> classes, BoundaryClass keep);

/// Classification of p_F(z) inside the section A_{q_F(z)} with F the first k coordinates.
Classification section_boundary_test(const ImplicitSet& set, std::span<const double> z, int k,
                                     const ClassifierBudget& budget, std::uint64_t seed);

struct StabilizedResult {
  /// nullopt when some k in the window was Indeterminate.
  std::optional<bool> in_boundary;
  std::vector<int> ks;
  std::vector<BoundaryClass> per_k;
};

/// True iff every k in [k_min, k_max] gives MTBoundary.
StabilizedResult stabilized_boundary_test(const ImplicitSet& set, std::span<const double> z, int k_min, int k_max,
                                          const ClassifierBudget& budget, std::uint64_t seed);

/// One row per point: coordinates, per-j fractions, class, delta, seed.
void write_classification_csv(std::ostream& out, std::span<const DensityProfile> profiles,
                              std::span<const Classification> classes);

}  // namespace gpm
