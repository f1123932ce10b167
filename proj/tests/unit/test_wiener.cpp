#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpm/errors.hpp"
#include "gpm/stats.hpp"
#include "gpm/wiener.hpp"

using namespace gpm;

namespace {

ImplicitSet interval(double lo, double hi) {
  return set_intersection(make_half_space({-1.0}, -lo), make_half_space({1.0}, hi));
}

}  // namespace

TEST_SUITE("wiener-example") {
  TEST_CASE("schauder functions") {
    CHECK(schauder(0, 0.3) == doctest::Approx(0.3));
    CHECK(schauder(0, 1.0) == doctest::Approx(1.0));
    // first hat peaks at 1/2 with height 1/2
    CHECK(schauder(1, 0.5) == doctest::Approx(0.5));
    CHECK(schauder(1, 0.0) == doctest::Approx(0.0));
    CHECK(schauder(1, 1.0) == doctest::Approx(0.0));
  }

  TEST_CASE("path synthesis") {
    const PathDiscretization disc(2, 1);
    const Vec grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    const Vec zero = brownian_from_coeffs(Vec(4, 0.0), disc, grid);
    for (double v : zero) CHECK(v == 0.0);
    CHECK_THROWS_AS(brownian_from_coeffs(Vec(4, 0.0), disc, Vec{0.3}), ContractError);
  }

  TEST_CASE("brownian marginals") {
    const std::size_t n = 100000;
    const PathDiscretization disc(2, 1);
    const SampleBatch batch = sample(GaussianSpace(disc.coefficient_dim()), n, 31);
    std::vector<double> end(n);
    Moments quarter;
    Moments incr_cov;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec w = brownian_from_coeffs(batch.point(i), disc, Vec{0.25, 0.5, 1.0});
      end[i] = w[2];
      quarter.add(w[0] * w[0]);
      incr_cov.add(w[0] * (w[1] - w[0]));
    }
    CHECK(ks_statistic_normal(end) < ks_critical_1pct(n));
    CHECK(std::abs(quarter.mean() - 0.25) < 4.0 * quarter.std_error());
    CHECK(std::abs(incr_cov.mean()) < 4.0 * incr_cov.std_error());
  }

  TEST_CASE("path event sets") {
    const ImplicitSet free = path_event_set(DomainSpec(make_full_space(1)), 2);
    CHECK(free.dim() == 4);
    const SampleBatch pts = sample(GaussianSpace(4), 1000, 2);
    for (std::size_t i = 0; i < pts.count(); ++i) CHECK(free.contains(pts.point(i)));

    const double b = 0.8;
    const ImplicitSet barrier = path_event_set(DomainSpec(make_half_space({1.0}, b)), 0);
    CHECK(barrier.dim() == 1);
    CHECK(barrier.contains(Vec{0.79}));
    CHECK_FALSE(barrier.contains(Vec{0.81}));

    const ImplicitSet two = path_event_set(DomainSpec(interval(-b, b)), 3);
    CHECK(two.contains(Vec(8, 0.0)));
    CHECK(two.convex_flag() == std::optional<bool>(true));
    CHECK_THROWS_AS(DomainSpec(interval(0.5, 1.0)), ContractError);
  }

  TEST_CASE("unconstrained paths have zero perimeter at every level") {
    DualOptions opt;
    opt.degree = 1;
    opt.iterations = 10;
    opt.samples = 2000;
    const GrowthReport g = perimeter_growth(DomainSpec(make_full_space(1)), std::vector<int>{0, 1, 2}, opt, 3);
    for (const PerimeterEstimate& e : g.estimates) CHECK(e.value == 0.0);
    CHECK(g.all_finite);
    CHECK(g.nondecreasing);
  }

  TEST_CASE("one-sided barrier at level zero") {
    DualOptions opt;
    opt.degree = 1;
    opt.iterations = 80;
    opt.samples = 20000;
    const GrowthReport g = perimeter_growth(DomainSpec(make_half_space({1.0}, 1.0)), std::vector<int>{0}, opt, 4);
    CHECK(g.estimates[0].value == doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi)).epsilon(0.05));
  }

  TEST_CASE("convex audits") {
    const ClassifierBudget budget{3, 9, 400, 0.01};
    CHECK(convex_boundary_audit(make_box({-1.0, -1.0}, {1.0, 1.0}), 300, budget, 1).fraction >= 0.95);
    CHECK(convex_boundary_audit(make_ball({0.0, 0.0, 0.0}, 1.0), 300, budget, 2).fraction >= 0.95);
    const ImplicitSet flat = ImplicitSet::from_oracle(
        2, [](std::span<const double> x) { return x[1] == 0.0 && std::abs(x[0]) <= 1.0; }, true, "flat");
    CHECK_THROWS_AS(convex_boundary_audit(flat, 100, budget, 3), UnsupportedError);
  }
}
