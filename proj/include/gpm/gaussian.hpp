#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gpm/linalg.hpp"

namespace gpm {

/// Largest ambient dimension the toolkit accepts.
inline constexpr int kMaxDim = 64;

/// Standard Gaussian measure on R^m.
class GaussianSpace {
 public:
  explicit GaussianSpace(int dim);
  int dim() const { return dim_; }

 private:
  int dim_;
};

/// R^m = F_k (+) tail, with F_k spanned by the first k coordinates.
class CoordinateSplit {
 public:
  CoordinateSplit(int ambient_dim, int head_dim);
  int ambient_dim() const { return ambient_; }
  int head_dim() const { return head_; }
  int tail_dim() const { return ambient_ - head_; }

 private:
  int ambient_;
  int head_;
};

/// Row-major block of iid standard normal points.
class SampleBatch {
 public:
  SampleBatch(int dim, std::uint64_t seed, std::vector<double> data);

  int dim() const { return dim_; }
  std::size_t count() const { return data_.size() / static_cast<std::size_t>(dim_); }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> point(std::size_t i) const {
    return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const SampleBatch&, const SampleBatch&) = default;

 private:
  int dim_;
  std::uint64_t seed_;
  std::vector<double> data_;
};

/// (2 pi)^{-m/2} exp(-|x|^2 / 2) with m = x.size().
double gaussian_density(std::span<const double> x);
double density(const GaussianSpace& space, std::span<const double> x);

/// Standard normal CDF.
double normal_cdf(double t);

/// Point i is drawn from the counter stream (seed, i); the batch is
/// identical for any thread count.
SampleBatch sample(const GaussianSpace& space, std::size_t count, std::uint64_t seed);

Vec project_head(const CoordinateSplit& split, std::span<const double> z);
Vec project_tail(const CoordinateSplit& split, std::span<const double> z);

}  // namespace gpm
