#include "gpm/set_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gpm/errors.hpp"
#include "gpm/quadrature.hpp"

namespace gpm {

namespace {

using detail::Shape;
using ShapePtr = std::shared_ptr<const Shape>;

constexpr double kUnitTol = 1e-9;
constexpr std::size_t kMaxNodesPerChart = 2'000'000;

std::string vec_str(std::span<const double> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

double truncation_mass(int extra_dims) {
  return std::pow(std::erf(kChartHalfWidth / std::numbers::sqrt2), extra_dims);
}

BoundaryChart point_chart(Vec point, Vec outward) {
  BoundaryChart c;
  c.embed = [point](std::span<const double>) { return point; };
  c.area_factor = [](std::span<const double>) { return 1.0; };
  c.outward_normal = [outward](std::span<const double>) { return outward; };
  return c;
}

class FullSpace final : public Shape {
 public:
  explicit FullSpace(int dim) : Shape(dim) { charts_.emplace(); }
  bool contains(std::span<const double>) const override { return true; }
  std::optional<bool> convex() const override { return true; }
  std::string describe() const override { return "full(" + std::to_string(dim()) + ")"; }
  ShapePtr section(const ShapePtr&, int k, std::span<const double>) const override {
    return std::make_shared<FullSpace>(k);
  }
};

class EmptySet final : public Shape {
 public:
  explicit EmptySet(int dim) : Shape(dim) { charts_.emplace(); }
  bool contains(std::span<const double>) const override { return false; }
  std::optional<bool> convex() const override { return true; }
  std::string describe() const override { return "empty(" + std::to_string(dim()) + ")"; }
  ShapePtr section(const ShapePtr&, int k, std::span<const double>) const override {
    return std::make_shared<EmptySet>(k);
  }
};

// A single point: Lebesgue-null, so its measure-theoretic boundary is empty
// and the chart list is empty.
class PointShape final : public Shape {
 public:
  explicit PointShape(Vec p) : Shape(static_cast<int>(p.size())), p_(std::move(p)) { charts_.emplace(); }
  bool contains(std::span<const double> x) const override {
    return std::equal(x.begin(), x.end(), p_.begin());
  }
  std::optional<bool> convex() const override { return true; }
  std::string describe() const override { return "point" + vec_str(p_); }

 private:
  Vec p_;
};

class HalfSpace final : public Shape {
 public:
  HalfSpace(Vec u, double a) : Shape(static_cast<int>(u.size())), u_(std::move(u)), a_(a) {
    const int m = dim();
    if (m == 1) {
      charts_.emplace(std::vector<BoundaryChart>{point_chart({a_ * u_[0]}, u_)});
      return;
    }
    // Orthonormal basis of u^perp by Gram-Schmidt on the coordinate axes.
    std::vector<Vec> basis;
    for (int e = 0; e < m && static_cast<int>(basis.size()) < m - 1; ++e) {
      Vec v(static_cast<std::size_t>(m), 0.0);
      v[static_cast<std::size_t>(e)] = 1.0;
      const double pu = dot(v, u_);
      for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] -= pu * u_[static_cast<std::size_t>(i)];
      for (const Vec& b : basis) {
        const double pb = dot(v, b);
        for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] -= pb * b[static_cast<std::size_t>(i)];
      }
      const double len = norm(v);
      if (len < 1e-6) continue;
      for (double& vi : v) vi /= len;
      basis.push_back(std::move(v));
    }
    BoundaryChart c;
    c.lo.assign(static_cast<std::size_t>(m - 1), -kChartHalfWidth);
    c.hi.assign(static_cast<std::size_t>(m - 1), kChartHalfWidth);
    Vec base = u_;
    for (double& b : base) b *= a_;
    c.embed = [base, basis](std::span<const double> t) {
      Vec x = base;
      for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += t[j] * basis[j][i];
      return x;
    };
    c.area_factor = [](std::span<const double>) { return 1.0; };
    c.outward_normal = [u = u_](std::span<const double>) { return u; };
    c.captured_mass = truncation_mass(m - 1);
    charts_.emplace(std::vector<BoundaryChart>{std::move(c)});
  }

  bool contains(std::span<const double> x) const override { return dot(u_, x) <= a_; }
  std::optional<bool> convex() const override { return true; }
  std::optional<Vec> outward_normal(std::span<const double>) const override { return u_; }
  bool has_normal_field() const override { return true; }
  std::string describe() const override {
    return "half_space(u=" + vec_str(u_) + ", a=" + std::to_string(a_) + ")";
  }

  ShapePtr section(const ShapePtr&, int k, std::span<const double> y) const override {
    const std::span<const double> head(u_.data(), static_cast<std::size_t>(k));
    const std::span<const double> tail(u_.data() + k, u_.size() - static_cast<std::size_t>(k));
    const double rhs = a_ - dot(tail, y);
    const double len = norm(head);
    if (len < 1e-14) {
      if (rhs >= 0.0) return std::make_shared<FullSpace>(k);
      return std::make_shared<EmptySet>(k);
    }
    Vec uh(head.begin(), head.end());
    for (double& v : uh) v /= len;
    return std::make_shared<HalfSpace>(std::move(uh), rhs / len);
  }

 private:
  Vec u_;
  double a_;
};

class Ball final : public Shape {
 public:
  Ball(Vec c, double r) : Shape(static_cast<int>(c.size())), c_(std::move(c)), r_(r) {
    const int m = dim();
    if (m == 1) {
      charts_.emplace(std::vector<BoundaryChart>{point_chart({c_[0] - r_}, {-1.0}),
                                                 point_chart({c_[0] + r_}, {1.0})});
      return;
    }
    // Hyperspherical angles phi_1..phi_{m-2} in [0, pi], phi_{m-1} in [0, 2 pi].
    BoundaryChart ch;
    ch.lo.assign(static_cast<std::size_t>(m - 1), 0.0);
    ch.hi.assign(static_cast<std::size_t>(m - 1), std::numbers::pi);
    ch.hi.back() = 2.0 * std::numbers::pi;
    auto direction = [m](std::span<const double> phi) {
      Vec d(static_cast<std::size_t>(m));
      double s = 1.0;
      for (int i = 0; i < m - 1; ++i) {
        d[static_cast<std::size_t>(i)] = s * std::cos(phi[static_cast<std::size_t>(i)]);
        s *= std::sin(phi[static_cast<std::size_t>(i)]);
      }
      d[static_cast<std::size_t>(m - 1)] = s;
      return d;
    };
    ch.embed = [direction, c = c_, r = r_](std::span<const double> phi) {
      Vec x = direction(phi);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = c[i] + r * x[i];
      return x;
    };
    ch.area_factor = [m, r = r_](std::span<const double> phi) {
      double a = std::pow(r, m - 1);
      for (int i = 0; i < m - 2; ++i) a *= std::pow(std::sin(phi[static_cast<std::size_t>(i)]), m - 2 - i);
      return a;
    };
    ch.outward_normal = direction;
    charts_.emplace(std::vector<BoundaryChart>{std::move(ch)});
  }

  bool contains(std::span<const double> x) const override { return distance_sq(x, c_) <= r_ * r_; }
  std::optional<bool> convex() const override { return true; }
  std::optional<Vec> outward_normal(std::span<const double> x) const override {
    Vec n(x.begin(), x.end());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] -= c_[i];
    const double len = norm(n);
    if (len == 0.0) return std::nullopt;
    for (double& v : n) v /= len;
    return n;
  }
  bool has_normal_field() const override { return true; }
  std::string describe() const override {
    return "ball(c=" + vec_str(c_) + ", r=" + std::to_string(r_) + ")";
  }

  ShapePtr section(const ShapePtr&, int k, std::span<const double> y) const override {
    const std::span<const double> ct(c_.data() + k, c_.size() - static_cast<std::size_t>(k));
    const double d2 = distance_sq(ct, y);
    const double r2 = r_ * r_ - d2;
    Vec ch(c_.begin(), c_.begin() + k);
    if (r2 < 0.0) return std::make_shared<EmptySet>(k);
    if (r2 == 0.0) return std::make_shared<PointShape>(std::move(ch));
    return std::make_shared<Ball>(std::move(ch), std::sqrt(r2));
  }

 private:
  Vec c_;
  double r_;
};

class Box final : public Shape {
 public:
  Box(Vec lo, Vec hi) : Shape(static_cast<int>(lo.size())), lo_(std::move(lo)), hi_(std::move(hi)) {
    const int m = dim();
    std::vector<BoundaryChart> faces;
    for (int axis = 0; axis < m; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const double level = side ? hi_[static_cast<std::size_t>(axis)] : lo_[static_cast<std::size_t>(axis)];
        Vec normal(static_cast<std::size_t>(m), 0.0);
        normal[static_cast<std::size_t>(axis)] = side ? 1.0 : -1.0;
        BoundaryChart c;
        for (int j = 0; j < m; ++j) {
          if (j == axis) continue;
          c.lo.push_back(lo_[static_cast<std::size_t>(j)]);
          c.hi.push_back(hi_[static_cast<std::size_t>(j)]);
        }
        c.embed = [axis, level, m](std::span<const double> t) {
          Vec x(static_cast<std::size_t>(m));
          std::size_t p = 0;
          for (int j = 0; j < m; ++j) x[static_cast<std::size_t>(j)] = j == axis ? level : t[p++];
          return x;
        };
        c.area_factor = [](std::span<const double>) { return 1.0; };
        c.outward_normal = [normal](std::span<const double>) { return normal; };
        faces.push_back(std::move(c));
      }
    }
    charts_.emplace(std::move(faces));
  }

  bool contains(std::span<const double> x) const override {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
    return true;
  }
  std::optional<bool> convex() const override { return true; }
  // Normal of the nearest face.
  std::optional<Vec> outward_normal(std::span<const double> x) const override {
    std::size_t best_axis = 0;
    double best = INFINITY;
    double sign = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double dl = std::abs(x[i] - lo_[i]);
      const double dh = std::abs(x[i] - hi_[i]);
      if (dl < best) best = dl, best_axis = i, sign = -1.0;
      if (dh < best) best = dh, best_axis = i, sign = 1.0;
    }
    Vec n(x.size(), 0.0);
    n[best_axis] = sign;
    return n;
  }
  bool has_normal_field() const override { return true; }
  std::string describe() const override { return "box(lo=" + vec_str(lo_) + ", hi=" + vec_str(hi_) + ")"; }

  ShapePtr section(const ShapePtr&, int k, std::span<const double> y) const override {
    for (std::size_t i = 0; i < y.size(); ++i) {
      const std::size_t j = static_cast<std::size_t>(k) + i;
      if (y[i] < lo_[j] || y[i] > hi_[j]) return std::make_shared<EmptySet>(k);
    }
    return std::make_shared<Box>(Vec(lo_.begin(), lo_.begin() + k), Vec(hi_.begin(), hi_.begin() + k));
  }

 private:
  Vec lo_, hi_;
};

// Closed segment [p, q] in R^m, m >= 2. Membership is exact up to 1e-12
// relative rounding; Lebesgue-null, so no charts contribute perimeter.
class Segment final : public Shape {
 public:
  Segment(Vec p, Vec q) : Shape(static_cast<int>(p.size())), p_(std::move(p)), q_(std::move(q)) {
    charts_.emplace();
    d_ = q_;
    for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= p_[i];
    len2_ = norm_sq(d_);
  }
  bool contains(std::span<const double> x) const override {
    double t = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) t += (x[i] - p_[i]) * d_[i];
    t /= len2_;
    if (t < 0.0 || t > 1.0) return false;
    double off = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = x[i] - p_[i] - t * d_[i];
      off += r * r;
    }
    return off <= 1e-24 * len2_;
  }
  std::optional<bool> convex() const override { return true; }
  std::string describe() const override { return "segment(" + vec_str(p_) + "->" + vec_str(q_) + ")"; }

 private:
  Vec p_, q_, d_;
  double len2_;
};

class OracleShape final : public Shape {
 public:
  OracleShape(int dim, ImplicitSet::Membership fn, std::optional<bool> convex, std::string name)
      : Shape(dim), fn_(std::move(fn)), convex_(convex), name_(std::move(name)) {}
  bool contains(std::span<const double> x) const override { return fn_(x); }
  std::optional<bool> convex() const override { return convex_; }
  std::string describe() const override { return name_; }

 private:
  ImplicitSet::Membership fn_;
  std::optional<bool> convex_;
  std::string name_;
};

class GenericSection final : public Shape {
 public:
  GenericSection(ShapePtr base, int k, Vec tail)
      : Shape(k), base_(std::move(base)), tail_(std::move(tail)) {}
  bool contains(std::span<const double> x) const override {
    double buf[kMaxDim];
    std::copy(x.begin(), x.end(), buf);
    std::copy(tail_.begin(), tail_.end(), buf + x.size());
    return base_->contains(std::span<const double>(buf, x.size() + tail_.size()));
  }
  // Sections of convex sets are convex.
  std::optional<bool> convex() const override {
    auto c = base_->convex();
    if (c && *c) return true;
    return std::nullopt;
  }
  std::string describe() const override {
    return "section(" + base_->describe() + ", k=" + std::to_string(dim()) + ", y=" + vec_str(tail_) + ")";
  }
  ShapePtr section(const ShapePtr&, int k, std::span<const double> y) const override {
    // (A_y)_{y'} = A_{(y', y)}
    Vec tail(y.begin(), y.end());
    tail.insert(tail.end(), tail_.begin(), tail_.end());
    return std::make_shared<GenericSection>(base_, k, std::move(tail));
  }

 private:
  ShapePtr base_;
  Vec tail_;
};

class Cylinder final : public Shape {
 public:
  Cylinder(ShapePtr base, int m) : Shape(m), base_(std::move(base)) {
    const int k = base_->dim();
    const int extra = m - k;
    if (const auto& bc = base_->charts()) {
      std::vector<BoundaryChart> out;
      for (const BoundaryChart& c : *bc) {
        BoundaryChart e;
        e.lo = c.lo;
        e.hi = c.hi;
        e.lo.insert(e.lo.end(), static_cast<std::size_t>(extra), -kChartHalfWidth);
        e.hi.insert(e.hi.end(), static_cast<std::size_t>(extra), kChartHalfWidth);
        const std::size_t p = c.lo.size();
        e.embed = [c, p](std::span<const double> t) {
          Vec x = c.embed(t.first(p));
          x.insert(x.end(), t.begin() + static_cast<std::ptrdiff_t>(p), t.end());
          return x;
        };
        e.area_factor = [c, p](std::span<const double> t) { return c.area_factor(t.first(p)); };
        e.outward_normal = [c, p, extra](std::span<const double> t) {
          Vec n = c.outward_normal(t.first(p));
          n.insert(n.end(), static_cast<std::size_t>(extra), 0.0);
          return n;
        };
        e.captured_mass = c.captured_mass * truncation_mass(extra);
        out.push_back(std::move(e));
      }
      charts_.emplace(std::move(out));
    }
  }
  bool contains(std::span<const double> x) const override {
    return base_->contains(x.first(static_cast<std::size_t>(base_->dim())));
  }
  std::optional<bool> convex() const override { return base_->convex(); }
  std::optional<Vec> outward_normal(std::span<const double> x) const override {
    auto n = base_->outward_normal(x.first(static_cast<std::size_t>(base_->dim())));
    if (n) n->resize(static_cast<std::size_t>(dim()), 0.0);
    return n;
  }
  bool has_normal_field() const override { return base_->has_normal_field(); }
  std::string describe() const override {
    return "cylinder(" + base_->describe() + ", m=" + std::to_string(dim()) + ")";
  }
  ShapePtr section(const ShapePtr&, int k, std::span<const double> y) const override {
    const int kb = base_->dim();
    if (k >= kb) {
      if (k == kb) return base_;
      return std::make_shared<Cylinder>(base_, k);
    }
    // Only the part of the tail inside the base coordinates matters.
    return base_->section(base_, k, y.first(static_cast<std::size_t>(kb - k)));
  }

 private:
  ShapePtr base_;
};

Vec apply_matrix(const Vec& q, std::span<const double> v) {
  const std::size_t m = v.size();
  Vec out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i] += q[i * m + j] * v[j];
  return out;
}

class Rotated final : public Shape {
 public:
  Rotated(ShapePtr base, Vec q) : Shape(base->dim()), base_(std::move(base)), q_(std::move(q)) {
    if (const auto& bc = base_->charts()) {
      std::vector<BoundaryChart> out;
      for (const BoundaryChart& c : *bc) {
        BoundaryChart r = c;
        r.embed = [c, q = q_](std::span<const double> t) { return apply_matrix(q, c.embed(t)); };
        r.outward_normal = [c, q = q_](std::span<const double> t) {
          return apply_matrix(q, c.outward_normal(t));
        };
        out.push_back(std::move(r));
      }
      charts_.emplace(std::move(out));
    }
  }
  bool contains(std::span<const double> x) const override {
    double buf[kMaxDim];
    apply_transpose(x, buf);
    return base_->contains(std::span<const double>(buf, x.size()));
  }
  std::optional<bool> convex() const override { return base_->convex(); }
  std::optional<Vec> outward_normal(std::span<const double> x) const override {
    double buf[kMaxDim];
    apply_transpose(x, buf);
    auto n = base_->outward_normal(std::span<const double>(buf, x.size()));
    if (!n) return n;
    return apply_matrix(q_, *n);
  }
  bool has_normal_field() const override { return base_->has_normal_field(); }
  std::string describe() const override { return "rotated(" + base_->describe() + ")"; }

 private:
  void apply_transpose(std::span<const double> v, double* out) const {
    const std::size_t m = v.size();
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += q_[i * m + j] * v[i];
      out[j] = s;
    }
  }

  ShapePtr base_;
  Vec q_;
};

class Complement final : public Shape {
 public:
  explicit Complement(ShapePtr base) : Shape(base->dim()), base_(std::move(base)) {
    if (const auto& bc = base_->charts()) {
      std::vector<BoundaryChart> out;
      for (const BoundaryChart& c : *bc) {
        BoundaryChart f = c;
        f.outward_normal = [c](std::span<const double> t) {
          Vec n = c.outward_normal(t);
          for (double& v : n) v = -v;
          return n;
        };
        out.push_back(std::move(f));
      }
      charts_.emplace(std::move(out));
    }
  }
  bool contains(std::span<const double> x) const override { return !base_->contains(x); }
  std::optional<Vec> outward_normal(std::span<const double> x) const override {
    auto n = base_->outward_normal(x);
    if (n)
      for (double& v : *n) v = -v;
    return n;
  }
  bool has_normal_field() const override { return base_->has_normal_field(); }
  std::string describe() const override { return "complement(" + base_->describe() + ")"; }
  ShapePtr section(const ShapePtr&, int k, std::span<const double> y) const override {
    return std::make_shared<Complement>(base_->section(base_, k, y));
  }

 private:
  ShapePtr base_;
};

class Combination final : public Shape {
 public:
  Combination(ShapePtr a, ShapePtr b, bool is_union)
      : Shape(a->dim()), a_(std::move(a)), b_(std::move(b)), union_(is_union) {}
  bool contains(std::span<const double> x) const override {
    return union_ ? (a_->contains(x) || b_->contains(x)) : (a_->contains(x) && b_->contains(x));
  }
  std::optional<bool> convex() const override {
    if (union_) return std::nullopt;
    const auto ca = a_->convex();
    const auto cb = b_->convex();
    if (ca && cb && *ca && *cb) return true;
    return std::nullopt;
  }
  std::string describe() const override {
    return std::string(union_ ? "union(" : "intersection(") + a_->describe() + ", " + b_->describe() + ")";
  }
  ShapePtr section(const ShapePtr&, int k, std::span<const double> y) const override {
    return std::make_shared<Combination>(a_->section(a_, k, y), b_->section(b_, k, y), union_);
  }

 private:
  ShapePtr a_, b_;
  bool union_;
};

}  // namespace

namespace detail {

std::shared_ptr<const Shape> Shape::section(const std::shared_ptr<const Shape>& self, int head_dim,
                                            std::span<const double> tail) const {
  return std::make_shared<GenericSection>(self, head_dim, Vec(tail.begin(), tail.end()));
}

}  // namespace detail

ImplicitSet::ImplicitSet(std::shared_ptr<const detail::Shape> shape) : shape_(std::move(shape)) {
  require(shape_ != nullptr, "ImplicitSet: null shape");
}

ImplicitSet ImplicitSet::from_oracle(int dim, Membership membership, std::optional<bool> convex,
                                     std::string name) {
  require(dim >= 1 && dim <= kMaxDim, "from_oracle: bad dimension");
  require(static_cast<bool>(membership), "from_oracle: empty membership function");
  return ImplicitSet(std::make_shared<OracleShape>(dim, std::move(membership), convex, std::move(name)));
}

const std::vector<BoundaryChart>& ImplicitSet::charts() const {
  const auto& c = shape_->charts();
  if (!c) throw UnsupportedError("no boundary charts for " + describe());
  return *c;
}

Vec ImplicitSet::normal(std::span<const double> x) const {
  require_dim(x.size(), static_cast<std::size_t>(dim()), "ImplicitSet::normal");
  if (!shape_->has_normal_field()) throw UnsupportedError("no normal field for " + describe());
  auto n = shape_->outward_normal(x);
  if (!n) throw UnsupportedError("normal undefined at " + vec_str(x));
  return *n;
}

ImplicitSet section(const ImplicitSet& set, const SectionSpec& sec) {
  require(set.dim() == sec.split.ambient_dim(), "section: set and split dimensions differ");
  require_dim(sec.tail.size(), static_cast<std::size_t>(sec.split.tail_dim()), "section tail");
  if (sec.split.tail_dim() == 0) return set;
  return ImplicitSet(set.shape()->section(set.shape(), sec.split.head_dim(), sec.tail));
}

namespace {
void check_dim(std::size_t m, const char* what) {
  require(m >= 1 && m <= static_cast<std::size_t>(kMaxDim), std::string(what) + ": bad dimension");
}
}  // namespace

ImplicitSet make_half_space(Vec unit_normal, double offset) {
  check_dim(unit_normal.size(), "make_half_space");
  require(std::abs(norm(unit_normal) - 1.0) <= kUnitTol, "make_half_space: normal must have unit length");
  require(std::isfinite(offset), "make_half_space: offset must be finite");
  return ImplicitSet(std::make_shared<HalfSpace>(std::move(unit_normal), offset));
}

ImplicitSet make_ball(Vec center, double radius) {
  check_dim(center.size(), "make_ball");
  require(radius > 0.0 && std::isfinite(radius), "make_ball: radius must be positive");
  return ImplicitSet(std::make_shared<Ball>(std::move(center), radius));
}

ImplicitSet make_box(Vec lo, Vec hi) {
  check_dim(lo.size(), "make_box");
  require_dim(hi.size(), lo.size(), "make_box");
  for (std::size_t i = 0; i < lo.size(); ++i) require(lo[i] < hi[i], "make_box: need lo < hi componentwise");
  return ImplicitSet(std::make_shared<Box>(std::move(lo), std::move(hi)));
}

ImplicitSet make_segment(Vec p, Vec q) {
  check_dim(p.size(), "make_segment");
  require_dim(q.size(), p.size(), "make_segment");
  require(p.size() >= 2, "make_segment: a segment has positive length measure in R^1; use make_box");
  require(distance_sq(p, q) > 0.0, "make_segment: endpoints coincide");
  return ImplicitSet(std::make_shared<Segment>(std::move(p), std::move(q)));
}

ImplicitSet make_point(Vec p) {
  check_dim(p.size(), "make_point");
  return ImplicitSet(std::make_shared<PointShape>(std::move(p)));
}

ImplicitSet make_full_space(int dim) {
  check_dim(static_cast<std::size_t>(std::max(dim, 0)), "make_full_space");
  return ImplicitSet(std::make_shared<FullSpace>(dim));
}

ImplicitSet make_empty_set(int dim) {
  check_dim(static_cast<std::size_t>(std::max(dim, 0)), "make_empty_set");
  return ImplicitSet(std::make_shared<EmptySet>(dim));
}

ImplicitSet make_cylinder(const ImplicitSet& base, int ambient_dim) {
  require(ambient_dim >= base.dim() && ambient_dim <= kMaxDim, "make_cylinder: need k <= m <= 64");
  if (ambient_dim == base.dim()) return base;
  return ImplicitSet(std::make_shared<Cylinder>(base.shape(), ambient_dim));
}

ImplicitSet rotate(const ImplicitSet& set, std::vector<double> rotation) {
  const std::size_t m = static_cast<std::size_t>(set.dim());
  require(rotation.size() == m * m, "rotate: matrix must be m x m");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < m; ++l) s += rotation[i * m + l] * rotation[j * m + l];
      require(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-9, "rotate: matrix must be orthogonal");
    }
  return ImplicitSet(std::make_shared<Rotated>(set.shape(), std::move(rotation)));
}

ImplicitSet complement(const ImplicitSet& set) { return ImplicitSet(std::make_shared<Complement>(set.shape())); }

ImplicitSet set_union(const ImplicitSet& a, const ImplicitSet& b) {
  require(a.dim() == b.dim(), "set_union: dimension mismatch");
  return ImplicitSet(std::make_shared<Combination>(a.shape(), b.shape(), true));
}

ImplicitSet set_intersection(const ImplicitSet& a, const ImplicitSet& b) {
  require(a.dim() == b.dim(), "set_intersection: dimension mismatch");
  return ImplicitSet(std::make_shared<Combination>(a.shape(), b.shape(), false));
}

bool chart_brackets_boundary(const ImplicitSet& set, const BoundaryChart& chart,
                             std::span<const double> t, double eps) {
  const Vec x = chart.embed(t);
  const Vec n = chart.outward_normal(t);
  Vec out = x, in = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] += eps * n[i];
    in[i] -= eps * n[i];
  }
  return !set.contains(out) && set.contains(in);
}

double integrate_charts(const std::vector<BoundaryChart>& charts, int order,
                        const SurfaceIntegrand& integrand) {
  require(order >= 1, "integrate_charts: order must be positive");
  double total = 0.0;
  for (const BoundaryChart& c : charts) {
    const int p = c.param_dim();
    if (p == 0) {
      const Vec x = c.embed({});
      total += integrand(x, c.outward_normal({})) * c.area_factor({}) / c.captured_mass;
      continue;
    }
    int n = order;
    while (n > 2 && std::pow(static_cast<double>(n), p) > static_cast<double>(kMaxNodesPerChart)) --n;
    std::vector<QuadratureRule> rules;
    for (int d = 0; d < p; ++d)
      rules.push_back(gauss_legendre(n, c.lo[static_cast<std::size_t>(d)], c.hi[static_cast<std::size_t>(d)]));
    std::vector<int> idx(static_cast<std::size_t>(p), 0);
    Vec t(static_cast<std::size_t>(p));
    double sum = 0.0;
    while (true) {
      double w = 1.0;
      for (int d = 0; d < p; ++d) {
        const auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
        t[static_cast<std::size_t>(d)] = rules[static_cast<std::size_t>(d)].nodes[i];
        w *= rules[static_cast<std::size_t>(d)].weights[i];
      }
      const double area = c.area_factor(t);
      if (area != 0.0) sum += w * area * integrand(c.embed(t), c.outward_normal(t));
      int d = 0;
      while (d < p && ++idx[static_cast<std::size_t>(d)] == n) idx[static_cast<std::size_t>(d++)] = 0;
      if (d == p) break;
    }
    total += sum / c.captured_mass;
  }
  return total;
}

SurfaceIntegral integrate_charts_refined(const std::vector<BoundaryChart>& charts, int order,
                                         const SurfaceIntegrand& integrand) {
  const double coarse = integrate_charts(charts, order, integrand);
  const double fine = integrate_charts(charts, (3 * order + 1) / 2, integrand);
  return {fine, std::abs(fine - coarse)};
}

}  // namespace gpm
