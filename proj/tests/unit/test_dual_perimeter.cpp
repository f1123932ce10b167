#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpm/dual_perimeter.hpp"
#include "gpm/errors.hpp"

using namespace gpm;

namespace {

const double kPhi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double phi(double t) { return kPhi0 * std::exp(-0.5 * t * t); }

// Small but adequate budget for fixtures whose optimum is a low-degree field.
PerimeterEstimate quick(const ImplicitSet& set, int degree = 2, std::uint64_t seed = 1) {
  return maximize_perimeter(set, degree, 80, 20000, seed);
}

}  // namespace

TEST_SUITE("dual-perimeter") {
  TEST_CASE("dual objective of simple fields") {
    const TestField e1 = TestField::constant(Vec{1.0, 0.0});
    const MeanEstimate full = estimate_dual_objective(make_full_space(2), e1, 100000, 3);
    CHECK(std::abs(full.value) <= 3.0 * full.std_error);

    const TestField minus_e1 = TestField::constant(Vec{-1.0, 0.0});
    const MeanEstimate half = estimate_dual_objective(make_half_space({1.0, 0.0}, 0.0), minus_e1, 100000, 4);
    CHECK(std::abs(half.value - kPhi0) <= 3.0 * half.std_error);

    const MeanEstimate empty = estimate_dual_objective(make_empty_set(2), e1, 1000, 5);
    CHECK(empty.value == 0.0);
    CHECK(empty.std_error == 0.0);
    CHECK_THROWS_AS(estimate_dual_objective(make_full_space(2), e1, 0, 1), EmptyBatchError);
  }

  TEST_CASE("dual objective rejects inadmissible raw fields") {
    const TestField big = TestField::constant(Vec{2.0, 0.0});
    CHECK_THROWS_AS(estimate_dual_objective(make_full_space(2), big, 1000, 1), ContractError);
  }

  TEST_CASE("make_admissible bounds the field on fresh points") {
    TestField raw(2, 2, 2, NormControl::none);
    for (std::size_t i = 0; i < raw.coefficients().size(); ++i) raw.coefficients()[i] = 0.7 * std::sin(1.0 + i);
    const TestField f = make_admissible(raw, 20000, 9);
    const SampleBatch fresh = sample(GaussianSpace(2), 20000, 10);
    for (std::size_t i = 0; i < fresh.count(); ++i) CHECK(norm(f.value(fresh.point(i))) <= 1.0 + 1e-12);
  }

  TEST_CASE("half-space perimeters") {
    for (double a : {0.0, 1.0}) {
      const PerimeterEstimate est = quick(make_half_space({1.0, 0.0}, a), 1);
      CHECK(est.value == doctest::Approx(phi(a)).epsilon(0.05));
      CHECK(est.std_error > 0.0);
      CHECK(est.method == PerimeterMethod::dual);
    }
  }

  TEST_CASE("empty and full space have zero perimeter") {
    CHECK(quick(make_empty_set(2)).value == 0.0);
    CHECK(quick(make_full_space(2)).value == 0.0);
  }

  TEST_CASE("surface oracle") {
    CHECK(surface_perimeter_oracle(make_ball({0.0, 0.0}, 1.0)).value ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
    for (int m : {2, 3, 5}) {
      Vec u(static_cast<std::size_t>(m), 0.0);
      u[0] = 1.0;
      CHECK(surface_perimeter_oracle(make_half_space(u, 0.7)).value == doctest::Approx(phi(0.7)).epsilon(1e-6));
    }
    for (double r : {0.1, 0.01, 0.001}) {
      CHECK(surface_perimeter_oracle(make_ball({0.0, 0.0}, r)).value ==
            doctest::Approx(r * std::exp(-0.5 * r * r)).epsilon(1e-10));
    }
    const ImplicitSet oracle_only =
        ImplicitSet::from_oracle(2, [](std::span<const double> x) { return x[0] * x[1] > 0.0; });
    CHECK_THROWS_AS(surface_perimeter_oracle(oracle_only), UnsupportedError);
  }

  TEST_CASE("gauss-green residual") {
    const ImplicitSet h = make_half_space({1.0, 0.0}, 0.0);
    const GaussGreenResidual r = gauss_green_residual(h, TestField::constant(Vec{-1.0, 0.0}), 100000, 7);
    CHECK(r.rhs == doctest::Approx(kPhi0).epsilon(1e-8));
    CHECK(std::abs(r.residual) <= 2.0 * r.std_error + 1e-12);
    const GaussGreenResidual zero = gauss_green_residual(make_ball({0.0, 0.0}, 1.0), TestField::constant(Vec{0.0, 0.0}),
                                                         1000, 1);
    CHECK(zero.residual == 0.0);
    CHECK(zero.lhs == 0.0);
  }

  TEST_CASE("lower-bound property") {
    const ImplicitSet ball = make_ball({0.3, -0.2}, 1.2);
    const double surface = surface_perimeter_oracle(ball).value;
    const PerimeterEstimate dual = quick(ball, 3);
    TestField raw(2, 1, 2, NormControl::none);
    raw.set_linear(0, 0, 1.0);
    raw.set_linear(1, 1, 1.0);
    const MeanEstimate fixed = estimate_dual_objective(ball, make_admissible(raw, 20000, 2), 40000, 3);
    CHECK(fixed.value <= dual.value + 2.0 * (fixed.std_error + dual.std_error));
    CHECK(dual.value <= surface + 2.0 * dual.std_error);
  }

  TEST_CASE("monotone in degree") {
    const ImplicitSet ball = make_ball({0.0, 0.0}, 1.0);
    const PerimeterEstimate d1 = quick(ball, 1);
    const PerimeterEstimate d3 = quick(ball, 3);
    CHECK(d1.value <= d3.value + 2.0 * (d1.std_error + d3.std_error));
  }

  TEST_CASE("complement symmetry") {
    const ImplicitSet h = make_half_space({0.0, 1.0}, 0.4);
    const PerimeterEstimate a = quick(h, 1, 3);
    const PerimeterEstimate b = quick(complement(h), 1, 4);
    CHECK(std::abs(a.value - b.value) <= 2.0 * (a.std_error + b.std_error) + 0.02 * phi(0.4));
  }

  TEST_CASE("orthogonal invariance for half-spaces through the origin") {
    const PerimeterEstimate a = quick(make_half_space({1.0, 0.0}, 0.0), 1, 5);
    const PerimeterEstimate b = quick(make_half_space({0.6, -0.8}, 0.0), 1, 6);
    CHECK(a.value == doctest::Approx(kPhi0).epsilon(0.05));
    CHECK(b.value == doctest::Approx(kPhi0).epsilon(0.05));
  }

  TEST_CASE("optimizer is reproducible and validates its inputs") {
    const ImplicitSet ball = make_ball({0.0, 0.0}, 1.0);
    const PerimeterEstimate a = maximize_perimeter(ball, 2, 20, 5000, 11);
    const PerimeterEstimate b = maximize_perimeter(ball, 2, 20, 5000, 11);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK_THROWS_AS(maximize_perimeter(ball, -1, 20, 5000, 1), ContractError);
    CHECK_THROWS_AS(maximize_perimeter(ball, 2, 0, 5000, 1), ContractError);
  }
}
