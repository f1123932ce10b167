#include <omp.h>

#include <cmath>

#include "doctest.h"
#include "gpm/boundary.hpp"
#include "gpm/hausdorff.hpp"
#include "gpm/kernels.hpp"

using namespace gpm;

namespace {

ImplicitSet disk_with_spike() { return set_union(make_ball({0.0, 0.0}, 1.0), make_segment({1.0, 0.0}, {2.0, 0.0})); }

const ClassifierBudget kBudget{5, 9, 4000, 0.01};

}  // namespace

TEST_SUITE("boundary-classifier") {
  TEST_CASE("interior density is one at every radius") {
    const DensityProfile p = density_profile(make_ball({0.0, 0.0}, 1.0), Vec{0.2, 0.1}, 3, 9, 500, 1);
    for (double f : p.in_fraction) CHECK(f == 1.0);
    CHECK(classify(p).cls == BoundaryClass::FullDensity);
  }

  TEST_CASE("circle density tends to one half") {
    const DensityProfile p = density_profile(make_ball({0.0, 0.0}, 1.0), Vec{1.0, 0.0}, 3, 9, 20000, 2);
    const double f = p.in_fraction.back();
    CHECK(std::abs(f - 0.5) < 4.0 * p.std_error.back() + 2e-3);
    CHECK(classify(p).cls == BoundaryClass::MTBoundary);
    for (std::size_t j = 0; j < p.radii.size(); ++j) CHECK(p.radii[j] == std::ldexp(1.0, -p.js[j]));
  }

  TEST_CASE("square corner density tends to one quarter") {
    const DensityProfile p = density_profile(make_box({-1.0, -1.0}, {1.0, 1.0}), Vec{1.0, 1.0}, 3, 9, 20000, 3);
    CHECK(std::abs(p.in_fraction.back() - 0.25) < 4.0 * p.std_error.back());
    CHECK(classify(p).cls == BoundaryClass::MTBoundary);
  }

  TEST_CASE("spike points have null density") {
    const ImplicitSet u = disk_with_spike();
    CHECK(u.contains(Vec{1.5, 0.0}));
    CHECK(classify_point(u, Vec{1.5, 0.0}, kBudget, 4).cls == BoundaryClass::NullDensity);
    CHECK(classify_point(u, Vec{-0.3, 0.2}, kBudget, 5).cls == BoundaryClass::FullDensity);
    CHECK(classify_point(u, Vec{0.0, -1.0}, kBudget, 6).cls == BoundaryClass::MTBoundary);
  }

  TEST_CASE("complement duality") {
    const ImplicitSet b = make_ball({0.0, 0.0}, 1.0);
    const ImplicitSet c = complement(b);
    const Vec pts[] = {Vec{1.0, 0.0}, Vec{0.0, 0.3}, Vec{1.7, 0.0}, Vec{0.6, 0.8}};
    for (const Vec& x : pts) {
      const BoundaryClass a = classify_point(b, x, kBudget, 7).cls;
      const BoundaryClass d = classify_point(c, x, kBudget, 7).cls;
      if (a == BoundaryClass::MTBoundary) CHECK(d == BoundaryClass::MTBoundary);
      if (a == BoundaryClass::FullDensity) CHECK(d == BoundaryClass::NullDensity);
      if (a == BoundaryClass::NullDensity) CHECK(d == BoundaryClass::FullDensity);
    }
  }

  TEST_CASE("decision rule on synthetic profiles") {
    DensityProfile p;
    p.js = {8, 9};
    p.radii = {std::ldexp(1.0, -8), std::ldexp(1.0, -9)};
    p.samples_per_radius = 10000;
    p.std_error = {0.001, 0.001};
    p.in_fraction = {0.5, 0.5};
    CHECK(classify(p, 0.01).cls == BoundaryClass::MTBoundary);
    p.in_fraction = {1.0, 1.0};
    p.std_error = {0.0, 0.0};
    CHECK(classify(p, 0.01).cls == BoundaryClass::FullDensity);
    p.in_fraction = {0.0, 0.0};
    CHECK(classify(p, 0.01).cls == BoundaryClass::NullDensity);
    p.in_fraction = {0.011, 0.011};
    p.std_error = {0.001, 0.001};
    CHECK(classify(p, 0.01).cls == BoundaryClass::Indeterminate);
  }

  TEST_CASE("dyadic sufficiency") {
    // Density at radius 2^-j bounds the one at any r in [2^-(j+1), 2^-j] up to 2^m.
    const ImplicitSet sq = make_box({-1.0, -1.0}, {1.0, 1.0});
    const Vec corner = {1.0, 1.0};
    const DensityProfile dy = density_profile(sq, corner, 6, 7, 20000, 8);
    const std::size_t n = 20000;
    for (double s : {0.55, 0.7, 0.85}) {
      const double r = s * dy.radii[0];  // between 2^-7 and 2^-6
      const double frac = static_cast<double>(kernels::parallel::ball_hits(sq, corner, r, n, 9)) / n;
      CHECK(frac <= 4.0 * dy.in_fraction[0] + 0.01);
      CHECK(dy.in_fraction[1] <= 4.0 * frac + 0.01);
    }
  }

  TEST_CASE("section boundary test") {
    const ImplicitSet h = make_half_space({1.0, 0.0, 0.0}, 0.0);
    CHECK(section_boundary_test(h, Vec{0.0, 1.3, -0.4}, 1, kBudget, 1).cls == BoundaryClass::MTBoundary);
    CHECK(section_boundary_test(h, Vec{-2.0, 1.3, -0.4}, 1, kBudget, 1).cls == BoundaryClass::FullDensity);
    const ImplicitSet h2 = make_half_space({0.0, 1.0}, 0.0);
    const BoundaryClass degenerate = section_boundary_test(h2, Vec{0.0, 0.0}, 1, kBudget, 2).cls;
    CHECK(degenerate != BoundaryClass::MTBoundary);
    CHECK(degenerate != BoundaryClass::Indeterminate);
  }

  TEST_CASE("stabilized boundary test") {
    const ImplicitSet b4 = make_ball({0.0, 0.0, 0.0, 0.0}, 1.0);
    const Vec on = {0.5, 0.5, 0.5, 0.5};
    const StabilizedResult r = stabilized_boundary_test(b4, on, 2, 4, kBudget, 3);
    REQUIRE(r.in_boundary.has_value());
    CHECK(*r.in_boundary);
    const StabilizedResult in = stabilized_boundary_test(b4, Vec{0.1, 0.0, 0.0, 0.0}, 2, 4, kBudget, 4);
    REQUIRE(in.in_boundary.has_value());
    CHECK_FALSE(*in.in_boundary);
    for (BoundaryClass c : in.per_k) CHECK(c == BoundaryClass::FullDensity);
    const StabilizedResult spike = stabilized_boundary_test(disk_with_spike(), Vec{1.5, 0.0}, 1, 2, kBudget, 5);
    REQUIRE(spike.in_boundary.has_value());
    CHECK_FALSE(*spike.in_boundary);
    CHECK(spike.per_k.back() == BoundaryClass::NullDensity);
  }

  TEST_CASE("cloud classification is deterministic across thread counts") {
    const ImplicitSet ball = make_ball({0.0, 0.0}, 1.0);
    const PointCloud cloud = chart_cloud(ball, 64, 2);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = classify_cloud(ball, cloud, {3, 9, 400, 0.01}, 5);
    omp_set_num_threads(3);
    const auto three = classify_cloud(ball, cloud, {3, 9, 400, 0.01}, 5);
    omp_set_num_threads(saved);
    CHECK(one == three);
    const PointCloud kept = filter_cloud(cloud, one, BoundaryClass::MTBoundary);
    CHECK(kept.size() <= cloud.size());
    CHECK(kept.size() >= 60);
  }
}
