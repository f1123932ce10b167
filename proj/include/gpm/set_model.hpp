#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpm/gaussian.hpp"
#include "gpm/linalg.hpp"

namespace gpm {

/// Half-width of the parameter box used for charts of unbounded boundaries.
/// The Gaussian mass beyond it is ~1e-15 per coordinate and is compensated
/// through BoundaryChart::captured_mass.
inline constexpr double kChartHalfWidth = 8.0;

/// Parameterization of a piece of the topological boundary.
///
/// The parameter box lives in R^{m-1}. For m = 1 the box is empty and the
/// chart is a single point; quadrature then degenerates to evaluation with
/// unit weight, which is exactly the counting measure.
struct BoundaryChart {
  Vec lo;
  Vec hi;
  std::function<Vec(std::span<const double>)> embed;
  std::function<double(std::span<const double>)> area_factor;
  std::function<Vec(std::span<const double>)> outward_normal;
  // Fraction of the Gaussian-weighted boundary mass inside [lo, hi].
  double captured_mass = 1.0;

  int param_dim() const { return static_cast<int>(lo.size()); }
};

class ImplicitSet;

namespace detail {

class Shape {
 public:
  explicit Shape(int dim) : dim_(dim) {}
  virtual ~Shape() = default;

  int dim() const { return dim_; }
  virtual bool contains(std::span<const double> x) const = 0;
  virtual std::optional<bool> convex() const { return std::nullopt; }
  virtual std::optional<Vec> outward_normal(std::span<const double>) const { return std::nullopt; }
  virtual bool has_normal_field() const { return false; }
  virtual std::string describe() const = 0;

  // Section at tail y with head dimension k. The default wraps the
  // membership oracle; primitives return the analytic section.
  virtual std::shared_ptr<const Shape> section(const std::shared_ptr<const Shape>& self, int head_dim,
                                               std::span<const double> tail) const;

  const std::optional<std::vector<BoundaryChart>>& charts() const { return charts_; }

 protected:
  std::optional<std::vector<BoundaryChart>> charts_;

 private:
  int dim_;
};

}  // namespace detail

/// A subset of R^m given by a membership oracle plus optional analytic
/// boundary data. Cheap to copy; the underlying shape is immutable and
/// safe to share across threads.
class ImplicitSet {
 public:
  using Membership = std::function<bool(std::span<const double>)>;

  explicit ImplicitSet(std::shared_ptr<const detail::Shape> shape);

  static ImplicitSet from_oracle(int dim, Membership membership,
                                 std::optional<bool> convex = std::nullopt,
                                 std::string name = "oracle");

  int dim() const { return shape_->dim(); }
  bool contains(std::span<const double> x) const { return shape_->contains(x); }
  std::optional<bool> convex_flag() const { return shape_->convex(); }

  bool has_charts() const { return shape_->charts().has_value(); }
  /// Throws UnsupportedError when the set carries no charts.
  const std::vector<BoundaryChart>& charts() const;

  bool has_normal_field() const { return shape_->has_normal_field(); }
  /// Outward unit normal at a boundary point. The inner normal sigma_A of
  /// the perimeter measure is its negative.
  Vec normal(std::span<const double> x) const;

  std::string describe() const { return shape_->describe(); }
  const std::shared_ptr<const detail::Shape>& shape() const { return shape_; }

 private:
  std::shared_ptr<const detail::Shape> shape_;
};

struct SectionSpec {
  CoordinateSplit split;
  Vec tail;
};

/// A_y = { x in R^k : x (+) y in A }.
ImplicitSet section(const ImplicitSet& set, const SectionSpec& sec);

ImplicitSet make_half_space(Vec unit_normal, double offset);  // { x : <u, x> <= a }
ImplicitSet make_ball(Vec center, double radius);             // closed ball
ImplicitSet make_box(Vec lo, Vec hi);                         // closed box
ImplicitSet make_segment(Vec p, Vec q);                       // Lebesgue-null piece, m >= 2
ImplicitSet make_point(Vec p);
ImplicitSet make_full_space(int dim);
ImplicitSet make_empty_set(int dim);
/// base x R^{m-k}: membership depends only on the first k coordinates.
ImplicitSet make_cylinder(const ImplicitSet& base, int ambient_dim);
/// Q A for an orthogonal matrix Q (row-major, m x m).
ImplicitSet rotate(const ImplicitSet& set, std::vector<double> rotation);

ImplicitSet complement(const ImplicitSet& set);
ImplicitSet set_union(const ImplicitSet& a, const ImplicitSet& b);
ImplicitSet set_intersection(const ImplicitSet& a, const ImplicitSet& b);

/// x(t) +/- eps * n(t) must be outside/inside the set.
bool chart_brackets_boundary(const ImplicitSet& set, const BoundaryChart& chart,
                             std::span<const double> t, double eps);

struct SurfaceIntegral {
  double value = 0.0;
  double error = 0.0;  // |Q(n) - Q(n')| for the two quadrature orders
};

using SurfaceIntegrand = std::function<double(std::span<const double> x, std::span<const double> outward)>;

/// Tensor Gauss-Legendre quadrature of the integrand times surface measure
/// over all charts, at a single order. The node count per chart is capped,
/// so high-dimensional charts silently use fewer nodes per axis.
double integrate_charts(const std::vector<BoundaryChart>& charts, int order,
                        const SurfaceIntegrand& integrand);

/// Same at orders `order` and ceil(1.5 order); reports the finer value and
/// the difference as the error estimate.
SurfaceIntegral integrate_charts_refined(const std::vector<BoundaryChart>& charts, int order,
                                         const SurfaceIntegrand& integrand);

}  // namespace gpm
