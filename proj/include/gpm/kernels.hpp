#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference and an OpenMP version. The OpenMP versions split the index range
// into fixed chunks of kChunk items and merge chunk results in chunk order,
// so their output does not depend on the thread count. The serial versions
// are kept for testing and benchmarking only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gpm/gaussian.hpp"
#include "gpm/set_model.hpp"
#include "gpm/stats.hpp"
#include "gpm/test_field.hpp"

namespace gpm::kernels {

inline constexpr std::size_t kChunk = 2048;

struct DualSums {
  Moments objective;      // of weight_i * grad*G(z_i)
  Vec gradient;           // mean over i of weight_i * d grad*G(z_i) / d params
};

namespace serial {

void fill_normal(std::uint64_t seed, int dim, std::span<double> out);
std::vector<std::uint8_t> membership(const ImplicitSet& set, const SampleBatch& batch);
DualSums dual_sums(const TestField& field, const SampleBatch& batch, std::span<const double> weights,
                   bool with_gradient);
double max_field_norm(const TestField& field, const SampleBatch& batch);
/// Points drawn uniformly from the closed ball B(center, radius) that fall in the set.
std::size_t ball_hits(const ImplicitSet& set, std::span<const double> center, double radius,
                      std::size_t n, std::uint64_t seed);
/// dist2[i] = min(dist2[i], |points_i - center|^2).
void min_distance_update(std::span<const double> points, int dim, std::span<const double> center,
                         std::span<double> dist2);

}  // namespace serial

namespace parallel {

void fill_normal(std::uint64_t seed, int dim, std::span<double> out);
std::vector<std::uint8_t> membership(const ImplicitSet& set, const SampleBatch& batch);
DualSums dual_sums(const TestField& field, const SampleBatch& batch, std::span<const double> weights,
                   bool with_gradient);
double max_field_norm(const TestField& field, const SampleBatch& batch);
std::size_t ball_hits(const ImplicitSet& set, std::span<const double> center, double radius,
                      std::size_t n, std::uint64_t seed);
void min_distance_update(std::span<const double> points, int dim, std::span<const double> center,
                         std::span<double> dist2);

}  // namespace parallel

/// Uniform point in the unit ball of R^k from a counter stream: normalized
/// Gaussian direction times U^{1/k}.
void uniform_in_ball(std::uint64_t seed, std::uint64_t index, std::span<const double> center,
                     double radius, std::span<double> out);

}  // namespace gpm::kernels
