#include "gpm/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "gpm/errors.hpp"
#include "gpm/gaussian.hpp"
#include "gpm/kernels.hpp"
#include "gpm/rng.hpp"

namespace gpm {

namespace {

constexpr double kShrink = 1.0 - 1e-9;
constexpr int kMaxGridDim = 4;
constexpr std::size_t kMaxCandidates = 64;

/// Uniform grid over the cloud. Cells are keyed by a hash of their integer
/// coordinates; collisions only add points that the distance filter drops.
class Grid {
 public:
  Grid(const PointCloud& cloud, double cell) : cloud_(cloud), cell_(cell), dim_(cloud.dim) {
    const std::size_t m = static_cast<std::size_t>(dim_);
    coords_.resize(cloud.size() * m);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto x = cloud.point(i);
      for (std::size_t d = 0; d < m; ++d) coords_[i * m + d] = static_cast<long>(std::floor(x[d] / cell_));
      cells_[key(std::span<const long>(coords_.data() + i * m, m))].push_back(i);
    }
  }

  /// Calls f(j) for every point j with |x_j - q| <= radius; radius <= reach * cell.
  template <class F>
  void for_each_near(std::span<const double> q, double radius, int reach, F&& f) const {
    const std::size_t m = static_cast<std::size_t>(dim_);
    std::vector<long> base(m), cur(m);
    for (std::size_t d = 0; d < m; ++d) base[d] = static_cast<long>(std::floor(q[d] / cell_));
    std::vector<int> off(m, -reach);
    const double r2 = radius * radius;
    while (true) {
      for (std::size_t d = 0; d < m; ++d) cur[d] = base[d] + off[d];
      const auto it = cells_.find(key(cur));
      if (it != cells_.end()) {
        for (std::size_t j : it->second) {
          if (!same_cell(j, cur)) continue;
          if (distance_sq(cloud_.point(j), q) <= r2) f(j);
        }
      }
      std::size_t d = 0;
      while (d < m && ++off[d] > reach) off[d++] = -reach;
      if (d == m) break;
    }
  }

 private:
  static std::uint64_t key(std::span<const long> c) {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (long v : c) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    return h;
  }
  bool same_cell(std::size_t j, std::span<const long> c) const {
    const std::size_t m = static_cast<std::size_t>(dim_);
    for (std::size_t d = 0; d < m; ++d)
      if (coords_[j * m + d] != c[d]) return false;
    return true;
  }

  const PointCloud& cloud_;
  double cell_;
  int dim_;
  std::vector<long> coords_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

/// Connected components of the graph joining points at distance <= eps,
/// each listed in increasing index order; components ordered by first index.
std::vector<std::vector<std::size_t>> components(const PointCloud& cloud, double eps) {
  const std::size_t n = cloud.size();
  DisjointSets ds(n);
  const int m = cloud.dim;
  if (m <= kMaxGridDim) {
    // Cells of side eps / sqrt(m) have diameter <= eps, so their members are
    // mutually connected; only cross-cell pairs need distance checks.
    const double cell = eps / std::sqrt(static_cast<double>(m)) * kShrink;
    const int reach = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m)))) + 1;
    const auto md = static_cast<std::size_t>(m);
    std::map<std::vector<long>, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<long> c(md);
      for (std::size_t d = 0; d < md; ++d) c[d] = static_cast<long>(std::floor(cloud.point(i)[d] / cell));
      cells[std::move(c)].push_back(i);
    }
    for (const auto& [c, members] : cells)
      for (std::size_t j : members) ds.unite(members.front(), j);
    std::vector<int> off(md);
    std::vector<long> nb(md);
    for (const auto& [c, members] : cells) {
      std::fill(off.begin(), off.end(), -reach);
      while (true) {
        for (std::size_t d = 0; d < md; ++d) nb[d] = c[d] + off[d];
        const auto it = cells.find(nb);
        if (it != cells.end() && ds.find(members.front()) != ds.find(it->second.front())) {
          bool linked = false;
          for (std::size_t a : members) {
            for (std::size_t b : it->second) {
              if (distance_sq(cloud.point(a), cloud.point(b)) <= eps * eps) {
                linked = true;
                break;
              }
            }
            if (linked) break;
          }
          if (linked) ds.unite(members.front(), it->second.front());
        }
        std::size_t d = 0;
        while (d < md && ++off[d] > reach) off[d++] = -reach;
        if (d == md) break;
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (ds.find(i) != ds.find(j) && distance_sq(cloud.point(i), cloud.point(j)) <= eps * eps) ds.unite(i, j);
  }
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = ds.find(i);
    auto [it, fresh] = slot.try_emplace(root, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

/// Distance from every point to its nearest other point (+inf if alone),
/// by a sweep along the coordinate of largest spread.
Vec nearest_neighbor_distances(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const auto m = static_cast<std::size_t>(cloud.dim);
  Vec out(n, std::numeric_limits<double>::infinity());
  if (n < 2) return out;
  std::size_t axis = 0;
  double spread = -1.0;
  for (std::size_t d = 0; d < m; ++d) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, cloud.point(i)[d]);
      hi = std::max(hi, cloud.point(i)[d]);
    }
    if (hi - lo > spread) {
      spread = hi - lo;
      axis = d;
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cloud.point(a)[axis] < cloud.point(b)[axis]; });
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t k = 0; k < sn; ++k) {
    const auto x = cloud.point(order[static_cast<std::size_t>(k)]);
    double best = std::numeric_limits<double>::infinity();
    for (std::ptrdiff_t j = k + 1; j < sn; ++j) {
      const auto y = cloud.point(order[static_cast<std::size_t>(j)]);
      const double gap = y[axis] - x[axis];
      if (gap * gap >= best) break;
      best = std::min(best, distance_sq(x, y));
    }
    for (std::ptrdiff_t j = k - 1; j >= 0; --j) {
      const auto y = cloud.point(order[static_cast<std::size_t>(j)]);
      const double gap = x[axis] - y[axis];
      if (gap * gap >= best) break;
      best = std::min(best, distance_sq(x, y));
    }
    out[order[static_cast<std::size_t>(k)]] = std::sqrt(best);
  }
  return out;
}

}  // namespace

PointCloud merge_clouds(const PointCloud& a, const PointCloud& b) {
  require(a.dim == b.dim, "merge_clouds: dimension mismatch");
  PointCloud out{a.dim, a.points, CloudProvenance::assembled};
  out.points.insert(out.points.end(), b.points.begin(), b.points.end());
  return out;
}

double unit_ball_volume(int n) {
  require(n >= 0, "unit_ball_volume: n must be nonnegative");
  // V_n = V_{n-2} 2 pi / n keeps V_0 = 1, V_1 = 2, V_2 = pi exact.
  double even = 1.0, odd = 2.0;
  for (int k = 2; k <= n; ++k) {
    double& v = (k % 2 == 0) ? even : odd;
    v *= 2.0 * std::numbers::pi / k;
  }
  return n % 2 == 0 ? even : odd;
}

namespace {

Covering cover_with_spacing(const PointCloud& cloud, double epsilon, const Vec& spacing) {
  const int m = cloud.dim;
  const std::size_t n = cloud.size();
  const double r = 0.5 * epsilon * kShrink;
  Covering cover{epsilon, {}};

  std::optional<Grid> grid;
  if (m <= kMaxGridDim) grid.emplace(cloud, r);
  auto near = [&](std::span<const double> q, auto&& f) {
    if (grid) {
      grid->for_each_near(q, r, 1, f);
    } else {
      for (std::size_t j = 0; j < n; ++j)
        if (distance_sq(cloud.point(j), q) <= r * r) f(j);
    }
  };

  std::vector<std::uint8_t> covered(n, 0);
  for (const auto& comp : components(cloud, epsilon)) {
    // Start at the point farthest from the component centroid.
    Vec centroid(static_cast<std::size_t>(m), 0.0);
    for (std::size_t i : comp)
      for (int d = 0; d < m; ++d) centroid[static_cast<std::size_t>(d)] += cloud.point(i)[static_cast<std::size_t>(d)];
    for (double& c : centroid) c /= static_cast<double>(comp.size());
    std::size_t u = comp.front();
    double far = -1.0;
    for (std::size_t i : comp) {
      const double d = distance_sq(cloud.point(i), centroid);
      if (d > far) {
        far = d;
        u = i;
      }
    }

    Vec dist2(comp.size(), std::numeric_limits<double>::infinity());
    Vec comp_points;
    comp_points.reserve(comp.size() * static_cast<std::size_t>(m));
    for (std::size_t i : comp) {
      const auto x = cloud.point(i);
      comp_points.insert(comp_points.end(), x.begin(), x.end());
    }

    std::size_t remaining = comp.size();
    while (remaining > 0) {
      std::vector<std::size_t> candidates;
      near(cloud.point(u), [&](std::size_t j) { candidates.push_back(j); });
      std::sort(candidates.begin(), candidates.end());
      const std::size_t stride = std::max<std::size_t>(1, candidates.size() / kMaxCandidates);
      std::size_t center = u;
      std::size_t best_gain = 0;
      for (std::size_t c = 0; c < candidates.size(); c += stride) {
        std::size_t gain = 0;
        near(cloud.point(candidates[c]), [&](std::size_t j) { gain += covered[j] ? 0 : 1; });
        if (gain > best_gain) {
          best_gain = gain;
          center = candidates[c];
        }
      }
      const auto cx = cloud.point(center);
      // Each point stands for the stretch of surface up to half-way to its
      // nearest neighbour; the ball grows to include those stretches.
      double reach = 0.0;
      near(cx, [&](std::size_t j) {
        if (covered[j]) return;
        covered[j] = 1;
        --remaining;
        const double half_gap = spacing[j] <= epsilon ? 0.5 * spacing[j] : 0.0;
        reach = std::max(reach, std::sqrt(distance_sq(cloud.point(j), cx)) + half_gap);
      });
      cover.balls.push_back({Vec(cx.begin(), cx.end()), std::min(2.0 * reach, epsilon * kShrink)});
      if (remaining == 0) break;
      kernels::parallel::min_distance_update(comp_points, m, cx, dist2);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < comp.size(); ++k) {
        if (!covered[comp[k]] && dist2[k] < best) {
          best = dist2[k];
          u = comp[k];
        }
      }
    }
  }
  return cover;
}

}  // namespace

Covering greedy_cover(const PointCloud& cloud, double epsilon) {
  require(epsilon > 0.0, "greedy_cover: epsilon must be positive");
  if (cloud.size() == 0) throw EmptyBatchError("greedy_cover: empty cloud");
  return cover_with_spacing(cloud, epsilon, nearest_neighbor_distances(cloud));
}

double covering_sum(const Covering& cover, int s, bool gaussian_weight) {
  const double vs = unit_ball_volume(s);
  double total = 0.0;
  for (const CoverBall& b : cover.balls) {
    const double radius = 0.5 * b.diameter;
    double term = s == 0 ? vs : vs * std::pow(radius, s);
    if (gaussian_weight) term *= gaussian_density(b.center);
    total += term;
  }
  return total;
}

double median_nn_distance(const PointCloud& cloud) {
  if (cloud.size() < 2) return 0.0;
  Vec nn = nearest_neighbor_distances(cloud);
  const auto mid = nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2);
  std::nth_element(nn.begin(), mid, nn.end());
  return *mid;
}

Vec default_schedule(const PointCloud& cloud) {
  const double nn = median_nn_distance(cloud);
  const double eps0 = nn > 0.0 ? 4096.0 * nn : 1.0;
  Vec out;
  for (int j = 0; j <= 5; ++j) out.push_back(std::ldexp(eps0, -j));
  return out;
}

namespace {

HausdorffEstimate summarize(const Vec& epsilons, const Vec& values, std::size_t cloud_size) {
  HausdorffEstimate est;
  est.epsilons = epsilons;
  est.values = values;
  est.cloud_size = cloud_size;
  est.value = values.back();
  const std::size_t k = values.size();
  est.trend = k >= 2 ? 2.0 * values[k - 1] - values[k - 2] : est.value;
  return est;
}

}  // namespace

HausdorffEstimate CoveringProfile::spherical_estimate() const { return summarize(epsilons, spherical, cloud_size); }
HausdorffEstimate CoveringProfile::gauss_estimate() const { return summarize(epsilons, weighted, cloud_size); }

CoveringProfile covering_profile(const PointCloud& cloud, std::span<const double> schedule) {
  require(!schedule.empty(), "hausdorff: empty epsilon schedule");
  if (cloud.size() == 0) throw EmptyBatchError("hausdorff: empty cloud");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    require(schedule[i] > 0.0, "hausdorff: epsilon must be positive");
    require(i == 0 || schedule[i] < schedule[i - 1], "hausdorff: schedule must be strictly decreasing");
  }
  const double nn = median_nn_distance(cloud);
  if (nn > schedule.back()) {
    throw ResolutionError("hausdorff: median point spacing " + std::to_string(nn) +
                          " exceeds finest epsilon " + std::to_string(schedule.back()));
  }
  CoveringProfile out;
  out.cloud_size = cloud.size();
  const Vec spacing = nearest_neighbor_distances(cloud);
  for (double eps : schedule) {
    const Covering cover = cover_with_spacing(cloud, eps, spacing);
    out.epsilons.push_back(eps);
    out.spherical.push_back(covering_sum(cover, cloud.dim - 1, false));
    out.weighted.push_back(covering_sum(cover, cloud.dim - 1, true));
  }
  return out;
}

HausdorffEstimate spherical_hausdorff(const PointCloud& cloud, std::span<const double> schedule) {
  return covering_profile(cloud, schedule).spherical_estimate();
}

HausdorffEstimate hausdorff_gauss(const PointCloud& cloud, std::span<const double> schedule) {
  return covering_profile(cloud, schedule).gauss_estimate();
}

PerimeterEstimate hausdorff_gauss(const ImplicitSet& set, int quadrature_order) {
  return surface_perimeter_oracle(set, quadrature_order);
}

PointCloud boundary_cloud(const ImplicitSet& set, std::size_t n, std::uint64_t seed, double tol) {
  require(n >= 1, "boundary_cloud: n must be at least 1");
  require(tol > 0.0, "boundary_cloud: tol must be positive");
  const int m = set.dim();
  const auto mdim = static_cast<std::size_t>(m);
  {
    const SampleBatch pilot = sample(GaussianSpace(m), 4096, derive_seed(seed, 0));
    const auto flags = kernels::parallel::membership(set, pilot);
    const auto inside = std::count(flags.begin(), flags.end(), 1);
    if (inside == 0 || inside == static_cast<std::ptrdiff_t>(flags.size()))
      throw DegenerateSetError("boundary_cloud: set is empty or full on the pilot sample");
  }
  const std::uint64_t pair_seed = derive_seed(seed, 1);
  PointCloud cloud{m, {}, CloudProvenance::bisection};
  const std::size_t budget = 200 * n;
  constexpr std::size_t kBlock = 8 * kernels::kChunk;
  Vec block(kBlock * mdim);
  std::vector<std::uint8_t> hit(kBlock);
  for (std::size_t start = 0; start < budget && cloud.size() < n; start += kBlock) {
    const auto count = static_cast<std::ptrdiff_t>(std::min(kBlock, budget - start));
#pragma omp parallel
    {
      Vec a(mdim), b(mdim), mid(mdim);
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        CounterRng rng(pair_seed, start + iu);
        for (std::size_t d = 0; d < mdim; ++d) a[d] = rng.normal();
        for (std::size_t d = 0; d < mdim; ++d) b[d] = rng.normal();
        const bool ina = set.contains(a);
        hit[iu] = ina != set.contains(b) ? 1 : 0;
        if (!hit[iu]) continue;
        if (!ina) std::swap(a, b);  // a inside, b outside
        while (std::sqrt(distance_sq(a, b)) > tol) {
          for (std::size_t d = 0; d < mdim; ++d) mid[d] = 0.5 * (a[d] + b[d]);
          if (set.contains(mid)) a.swap(mid);
          else b.swap(mid);
        }
        for (std::size_t d = 0; d < mdim; ++d) block[iu * mdim + d] = 0.5 * (a[d] + b[d]);
      }
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(count) && cloud.size() < n; ++i)
      if (hit[i]) cloud.append(std::span<const double>(block.data() + i * mdim, mdim));
  }
  if (cloud.size() == 0) throw DegenerateSetError("boundary_cloud: no straddling pair found within budget");
  return cloud;
}

PointCloud chart_cloud(const ImplicitSet& set, std::size_t n, std::uint64_t seed, bool corners) {
  const auto& charts = set.charts();
  const int m = set.dim();
  PointCloud cloud{m, {}, CloudProvenance::chart_sampled};
  if (charts.empty()) return cloud;

  // Pilot estimate of each chart's area and of its largest area factor.
  constexpr int kPilot = 512;
  std::vector<double> area(charts.size()), peak(charts.size());
  for (std::size_t c = 0; c < charts.size(); ++c) {
    const BoundaryChart& ch = charts[c];
    const auto p = static_cast<std::size_t>(ch.param_dim());
    if (p == 0) {
      area[c] = 1.0;
      peak[c] = 1.0;
      continue;
    }
    double vol = 1.0;
    for (std::size_t d = 0; d < p; ++d) vol *= ch.hi[d] - ch.lo[d];
    CounterRng rng(derive_seed(seed, 1000 + c), 0);
    Vec t(p);
    double sum = 0.0, top = 0.0;
    for (int i = 0; i < kPilot; ++i) {
      for (std::size_t d = 0; d < p; ++d) t[d] = ch.lo[d] + (ch.hi[d] - ch.lo[d]) * rng.uniform();
      const double a = ch.area_factor(t);
      sum += a;
      top = std::max(top, a);
    }
    area[c] = vol * sum / kPilot;
    peak[c] = 1.05 * top;
  }
  const double total = std::accumulate(area.begin(), area.end(), 0.0);

  for (std::size_t c = 0; c < charts.size(); ++c) {
    const BoundaryChart& ch = charts[c];
    const auto p = static_cast<std::size_t>(ch.param_dim());
    const auto want = static_cast<std::size_t>(std::llround(static_cast<double>(n) * area[c] / total));
    CounterRng rng(derive_seed(seed, 2000 + c), 0);
    Vec t(p);
    for (std::size_t got = 0; got < want;) {
      for (std::size_t d = 0; d < p; ++d) t[d] = ch.lo[d] + (ch.hi[d] - ch.lo[d]) * rng.uniform();
      if (p > 0 && rng.uniform() * peak[c] > ch.area_factor(t)) continue;
      cloud.append(ch.embed(t));
      ++got;
    }
    if (corners && p <= 10) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << p); ++mask) {
        for (std::size_t d = 0; d < p; ++d) t[d] = (mask >> d & 1) ? ch.hi[d] : ch.lo[d];
        cloud.append(ch.embed(t));
      }
    }
  }
  return cloud;
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  for (int d = 0; d < cloud.dim; ++d) out << (d ? "," : "") << 'x' << d;
  out << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto x = cloud.point(i);
    for (std::size_t d = 0; d < x.size(); ++d) out << (d ? "," : "") << x[d];
    out << '\n';
  }
}

void write_covering_csv(std::ostream& out, const Covering& cover) {
  if (cover.balls.empty()) return;
  const std::size_t m = cover.balls.front().center.size();
  for (std::size_t d = 0; d < m; ++d) out << 'c' << d << ',';
  out << "diameter\n";
  for (const CoverBall& b : cover.balls) {
    for (double v : b.center) out << v << ',';
    out << b.diameter << '\n';
  }
}

}  // namespace gpm
