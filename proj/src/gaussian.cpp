#include "gpm/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gpm/errors.hpp"
#include "gpm/kernels.hpp"

namespace gpm {

GaussianSpace::GaussianSpace(int dim) : dim_(dim) {
  require(dim >= 1 && dim <= kMaxDim,
          "GaussianSpace: dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
}

CoordinateSplit::CoordinateSplit(int ambient_dim, int head_dim)
    : ambient_(ambient_dim), head_(head_dim) {
  require(ambient_dim >= 1 && ambient_dim <= kMaxDim, "CoordinateSplit: bad ambient dimension");
  require(head_dim >= 1 && head_dim <= ambient_dim, "CoordinateSplit: need 1 <= k <= m");
}

SampleBatch::SampleBatch(int dim, std::uint64_t seed, std::vector<double> data)
    : dim_(dim), seed_(seed), data_(std::move(data)) {
  require(dim >= 1, "SampleBatch: dimension must be positive");
  require(data_.size() % static_cast<std::size_t>(dim) == 0, "SampleBatch: ragged data");
}

double gaussian_density(std::span<const double> x) {
  const double m = static_cast<double>(x.size());
  return std::exp(-0.5 * norm_sq(x) - 0.5 * m * std::log(2.0 * std::numbers::pi));
}

double density(const GaussianSpace& space, std::span<const double> x) {
  require_dim(x.size(), static_cast<std::size_t>(space.dim()), "density");
  return gaussian_density(x);
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

SampleBatch sample(const GaussianSpace& space, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw EmptyBatchError("sample: count must be at least 1");
  std::vector<double> data(count * static_cast<std::size_t>(space.dim()));
  kernels::parallel::fill_normal(seed, space.dim(), data);
  return SampleBatch(space.dim(), seed, std::move(data));
}

Vec project_head(const CoordinateSplit& split, std::span<const double> z) {
  require_dim(z.size(), static_cast<std::size_t>(split.ambient_dim()), "project_head");
  return Vec(z.begin(), z.begin() + split.head_dim());
}

Vec project_tail(const CoordinateSplit& split, std::span<const double> z) {
  require_dim(z.size(), static_cast<std::size_t>(split.ambient_dim()), "project_tail");
  return Vec(z.begin() + split.head_dim(), z.end());
}

}  // namespace gpm
