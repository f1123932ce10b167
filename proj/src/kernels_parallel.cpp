#include <omp.h>

#include <algorithm>
#include <cmath>

#include "gpm/errors.hpp"
#include "gpm/kernels.hpp"
#include "gpm/rng.hpp"

namespace gpm::kernels::parallel {

namespace {

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

}  // namespace

void fill_normal(std::uint64_t seed, int dim, std::span<double> out) {
  const std::size_t m = static_cast<std::size_t>(dim);
  const auto n = static_cast<std::ptrdiff_t>(out.size() / m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    for (std::size_t j = 0; j < m; ++j) out[static_cast<std::size_t>(i) * m + j] = rng.normal();
  }
}

std::vector<std::uint8_t> membership(const ImplicitSet& set, const SampleBatch& batch) {
  require(set.dim() == batch.dim(), "membership: dimension mismatch");
  std::vector<std::uint8_t> flags(batch.count());
  const auto n = static_cast<std::ptrdiff_t>(batch.count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    flags[static_cast<std::size_t>(i)] = set.contains(batch.point(static_cast<std::size_t>(i))) ? 1 : 0;
  return flags;
}

DualSums dual_sums(const TestField& field, const SampleBatch& batch, std::span<const double> weights,
                   bool with_gradient) {
  require(field.dim() == batch.dim(), "dual_sums: dimension mismatch");
  require_dim(weights.size(), batch.count(), "dual_sums weights");
  const std::size_t n = batch.count();
  const std::size_t chunks = chunk_count(n);
  const std::size_t np = with_gradient ? field.parameter_count() : 0;
  std::vector<Moments> parts(chunks);
  std::vector<double> grads(chunks * np, 0.0);

#pragma omp parallel
  {
    FieldWorkspace ws = field.make_workspace();
    Vec g(np);
    Vec acc(np);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
      const std::size_t cu = static_cast<std::size_t>(c);
      const std::size_t end = std::min(n, (cu + 1) * kChunk);
      Moments& mom = parts[cu];
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t i = cu * kChunk; i < end; ++i) {
        const double w = weights[i];
        if (w == 0.0) {
          mom.add(0.0);
          continue;
        }
        const double f = field.divergence_star(batch.point(i), ws, g);
        mom.add(w * f);
        for (std::size_t p = 0; p < np; ++p) acc[p] += w * g[p];
      }
      std::copy(acc.begin(), acc.end(), grads.begin() + static_cast<std::ptrdiff_t>(cu * np));
    }
  }

  DualSums out;
  out.gradient.assign(np, 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    out.objective.merge(parts[c]);
    for (std::size_t p = 0; p < np; ++p) out.gradient[p] += grads[c * np + p];
  }
  for (double& v : out.gradient) v /= static_cast<double>(n);
  return out;
}

double max_field_norm(const TestField& field, const SampleBatch& batch) {
  const auto n = static_cast<std::ptrdiff_t>(batch.count());
  double best = 0.0;
#pragma omp parallel reduction(max : best)
  {
    FieldWorkspace ws = field.make_workspace();
    Vec g(static_cast<std::size_t>(field.dim()));
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      field.value(batch.point(static_cast<std::size_t>(i)), ws, g);
      best = std::max(best, norm(g));
    }
  }
  return best;
}

std::size_t ball_hits(const ImplicitSet& set, std::span<const double> center, double radius,
                      std::size_t n, std::uint64_t seed) {
  require_dim(center.size(), static_cast<std::size_t>(set.dim()), "ball_hits");
  std::size_t hits = 0;
#pragma omp parallel reduction(+ : hits)
  {
    Vec x(center.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      uniform_in_ball(seed, static_cast<std::uint64_t>(i), center, radius, x);
      hits += set.contains(x) ? 1 : 0;
    }
  }
  return hits;
}

void min_distance_update(std::span<const double> points, int dim, std::span<const double> center,
                         std::span<double> dist2) {
  const std::size_t m = static_cast<std::size_t>(dim);
  const auto n = static_cast<std::ptrdiff_t>(dist2.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::size_t iu = static_cast<std::size_t>(i);
    const double d = distance_sq(points.subspan(iu * m, m), center);
    if (d < dist2[iu]) dist2[iu] = d;
  }
}

}  // namespace gpm::kernels::parallel
