#include <cmath>

#include "gpm/errors.hpp"
#include "gpm/kernels.hpp"
#include "gpm/rng.hpp"

namespace gpm::kernels {

void uniform_in_ball(std::uint64_t seed, std::uint64_t index, std::span<const double> center,
                     double radius, std::span<double> out) {
  CounterRng rng(seed, index);
  const std::size_t k = center.size();
  double len2 = 0.0;
  do {
    len2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = rng.normal();
      len2 += out[i] * out[i];
    }
  } while (len2 == 0.0);
  const double scale = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(k)) / std::sqrt(len2);
  for (std::size_t i = 0; i < k; ++i) out[i] = center[i] + scale * out[i];
}

namespace serial {

void fill_normal(std::uint64_t seed, int dim, std::span<double> out) {
  const std::size_t m = static_cast<std::size_t>(dim);
  for (std::size_t i = 0; i < out.size() / m; ++i) {
    CounterRng rng(seed, i);
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] = rng.normal();
  }
}

std::vector<std::uint8_t> membership(const ImplicitSet& set, const SampleBatch& batch) {
  require(set.dim() == batch.dim(), "membership: dimension mismatch");
  std::vector<std::uint8_t> flags(batch.count());
  for (std::size_t i = 0; i < batch.count(); ++i) flags[i] = set.contains(batch.point(i)) ? 1 : 0;
  return flags;
}

DualSums dual_sums(const TestField& field, const SampleBatch& batch, std::span<const double> weights,
                   bool with_gradient) {
  require(field.dim() == batch.dim(), "dual_sums: dimension mismatch");
  require_dim(weights.size(), batch.count(), "dual_sums weights");
  DualSums out;
  FieldWorkspace ws = field.make_workspace();
  Vec g(with_gradient ? field.parameter_count() : 0);
  if (with_gradient) out.gradient.assign(field.parameter_count(), 0.0);
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const double w = weights[i];
    if (w == 0.0) {
      out.objective.add(0.0);
      continue;
    }
    const double f = field.divergence_star(batch.point(i), ws, g);
    out.objective.add(w * f);
    if (with_gradient)
      for (std::size_t p = 0; p < g.size(); ++p) out.gradient[p] += w * g[p];
  }
  for (double& v : out.gradient) v /= static_cast<double>(batch.count());
  return out;
}

double max_field_norm(const TestField& field, const SampleBatch& batch) {
  FieldWorkspace ws = field.make_workspace();
  Vec g(static_cast<std::size_t>(field.dim()));
  double best = 0.0;
  for (std::size_t i = 0; i < batch.count(); ++i) {
    field.value(batch.point(i), ws, g);
    best = std::max(best, norm(g));
  }
  return best;
}

std::size_t ball_hits(const ImplicitSet& set, std::span<const double> center, double radius,
                      std::size_t n, std::uint64_t seed) {
  require_dim(center.size(), static_cast<std::size_t>(set.dim()), "ball_hits");
  Vec x(center.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    uniform_in_ball(seed, i, center, radius, x);
    hits += set.contains(x) ? 1 : 0;
  }
  return hits;
}

void min_distance_update(std::span<const double> points, int dim, std::span<const double> center,
                         std::span<double> dist2) {
  const std::size_t m = static_cast<std::size_t>(dim);
  for (std::size_t i = 0; i < dist2.size(); ++i) {
    const double d = distance_sq(points.subspan(i * m, m), center);
    if (d < dist2[i]) dist2[i] = d;
  }
}

}  // namespace serial
}  // namespace gpm::kernels
