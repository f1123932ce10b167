#include <omp.h>

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpm/errors.hpp"
#include "gpm/gaussian.hpp"
#include "gpm/quadrature.hpp"
#include "gpm/rng.hpp"
#include "gpm/stats.hpp"

using namespace gpm;

TEST_SUITE("gaussian") {
  TEST_CASE("density closed form") {
    CHECK(density(GaussianSpace(1), Vec{0.0}) == doctest::Approx(0.3989422804).epsilon(1e-10));
    CHECK(density(GaussianSpace(2), Vec{0.0, 0.0}) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
    const Vec x = {0.3, -1.2, 2.0};
    const double r2 = 0.09 + 1.44 + 4.0;
    CHECK(density(GaussianSpace(3), x) == doctest::Approx(std::pow(2.0 * std::numbers::pi, -1.5) * std::exp(-r2 / 2)));
  }

  TEST_CASE("density decays along rays") {
    for (int m : {1, 2, 5, 17}) {
      GaussianSpace space(m);
      Vec dir(static_cast<std::size_t>(m));
      CounterRng rng(9, static_cast<std::uint64_t>(m));
      for (double& d : dir) d = rng.normal();
      double prev = density(space, Vec(static_cast<std::size_t>(m), 0.0));
      for (double t = 0.5; t < 40.0; t *= 1.5) {
        Vec x = dir;
        for (double& v : x) v *= t;
        const double cur = density(space, x);
        CHECK(cur <= prev);
        if (prev > 1e-300) CHECK(cur < prev);
        prev = cur;
      }
      CHECK(prev < 1e-50);
    }
  }

  TEST_CASE("density rejects a dimension mismatch") {
    CHECK_THROWS_AS(density(GaussianSpace(2), Vec{1.0, 2.0, 3.0}), ContractError);
  }

  TEST_CASE("sampling is deterministic and rejects empty batches") {
    const SampleBatch a = sample(GaussianSpace(3), 1000, 42);
    const SampleBatch b = sample(GaussianSpace(3), 1000, 42);
    const SampleBatch c = sample(GaussianSpace(3), 1000, 43);
    CHECK(a == b);
    CHECK(!(a == c));
    CHECK(a.count() == 1000);
    CHECK_THROWS_AS(sample(GaussianSpace(3), 0, 1), EmptyBatchError);
  }

  TEST_CASE("sampling does not depend on the thread count") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const SampleBatch one = sample(GaussianSpace(4), 50000, 7);
    omp_set_num_threads(5);
    const SampleBatch five = sample(GaussianSpace(4), 50000, 7);
    omp_set_num_threads(saved);
    CHECK(one == five);
  }

  TEST_CASE("each coordinate passes a normality test") {
    const std::size_t n = 100000;
    const int m = 3;
    const SampleBatch batch = sample(GaussianSpace(m), n, 2024);
    for (int k = 0; k < m; ++k) {
      std::vector<double> xs(n);
      for (std::size_t i = 0; i < n; ++i) xs[i] = batch.point(i)[static_cast<std::size_t>(k)];
      CHECK(ks_statistic_normal(xs) < ks_critical_1pct(n));
    }
  }

  TEST_CASE("ks statistic flags a shifted sample") {
    std::vector<double> xs(20000);
    CounterRng rng(1, 0);
    for (double& x : xs) x = rng.normal() + 0.1;
    CHECK(ks_statistic_normal(xs) > ks_critical_1pct(xs.size()));
  }

  TEST_CASE("density integrates to one") {
    // importance sampling from N(0, s^2 I)
    const double s = 1.5;
    for (int m = 1; m <= 4; ++m) {
      GaussianSpace space(m);
      CounterRng rng(77, static_cast<std::uint64_t>(m));
      Moments mom;
      Vec x(static_cast<std::size_t>(m));
      for (int i = 0; i < 200000; ++i) {
        double r2 = 0.0;
        for (double& v : x) {
          v = s * rng.normal();
          r2 += v * v;
        }
        const double q = std::pow(2.0 * std::numbers::pi * s * s, -0.5 * m) * std::exp(-r2 / (2 * s * s));
        mom.add(density(space, x) / q);
      }
      CHECK(mom.mean() == doctest::Approx(1.0).epsilon(0.01));
    }
  }

  TEST_CASE("coordinate split") {
    const CoordinateSplit split(3, 1);
    const Vec z = {1.0, 2.0, 3.0};
    CHECK(project_head(split, z) == Vec{1.0});
    CHECK(project_tail(split, z) == Vec{2.0, 3.0});
    const Vec zero(3, 0.0);
    CHECK(project_head(split, zero) == Vec{0.0});
    CHECK(project_tail(split, zero) == Vec{0.0, 0.0});
    CHECK_THROWS_AS(project_head(split, Vec{1.0, 2.0}), ContractError);
  }

  TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.5 * std::erfc(-1.0 / std::numbers::sqrt2)));
  }

  TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const QuadratureRule rule = gauss_legendre(5, -1.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 9);
    CHECK(s == doctest::Approx((std::pow(2.0, 10) - 1.0) / 10.0).epsilon(1e-12));
  }

  TEST_CASE("derived seeds differ by tag") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CounterRng a(5, 3), b(5, 3);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  }
}
