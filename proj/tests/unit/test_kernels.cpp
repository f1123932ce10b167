#include <omp.h>

#include <cmath>

#include "doctest.h"
#include "gpm/kernels.hpp"
#include "gpm/rng.hpp"

using namespace gpm;
namespace ks = gpm::kernels::serial;
namespace kp = gpm::kernels::parallel;

namespace {

struct ThreadGuard {
  int saved = omp_get_max_threads();
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

TestField sample_field() {
  TestField f(2, 4, 2, NormControl::smooth_clamp);
  Vec p = f.parameters();
  CounterRng rng(12, 0);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) p[i] = 0.3 * rng.normal();
  f.set_parameters(p);
  return f;
}

}  // namespace

TEST_SUITE("kernels") {
  const std::size_t n = 3 * kernels::kChunk + 123;

  TEST_CASE("fill_normal: serial and parallel are identical") {
    std::vector<double> a(n * 3), b(n * 3);
    ks::fill_normal(5, 3, a);
    kp::fill_normal(5, 3, b);
    CHECK(a == b);
  }

  TEST_CASE("membership: serial and parallel are identical") {
    const SampleBatch batch = sample(GaussianSpace(2), n, 1);
    const ImplicitSet set = set_union(make_ball({0.0, 0.0}, 1.0), make_half_space({0.6, 0.8}, -0.5));
    CHECK(ks::membership(set, batch) == kp::membership(set, batch));
  }

  TEST_CASE("dual_sums: serial and parallel agree") {
    const SampleBatch batch = sample(GaussianSpace(2), n, 2);
    const TestField f = sample_field();
    std::vector<double> w(n);
    const auto in = ks::membership(make_ball({0.0, 0.0}, 1.0), batch);
    for (std::size_t i = 0; i < n; ++i) w[i] = in[i] ? 0.6 : -0.4;
    const auto s = ks::dual_sums(f, batch, w, true);
    const auto p = kp::dual_sums(f, batch, w, true);
    CHECK(s.objective.mean() == doctest::Approx(p.objective.mean()).epsilon(1e-12));
    CHECK(s.objective.std_error() == doctest::Approx(p.objective.std_error()).epsilon(1e-10));
    REQUIRE(s.gradient.size() == p.gradient.size());
    for (std::size_t i = 0; i < s.gradient.size(); ++i) CHECK(std::abs(s.gradient[i] - p.gradient[i]) < 1e-12);
  }

  TEST_CASE("max_field_norm, ball_hits, min_distance_update: serial and parallel agree") {
    const SampleBatch batch = sample(GaussianSpace(2), n, 3);
    const TestField f = sample_field();
    CHECK(ks::max_field_norm(f, batch) == kp::max_field_norm(f, batch));
    const ImplicitSet ball = make_ball({0.0, 0.0}, 1.0);
    const Vec c = {1.0, 0.0};
    CHECK(ks::ball_hits(ball, c, 0.05, n, 9) == kp::ball_hits(ball, c, 0.05, n, 9));
    std::vector<double> d1(n, 1e300), d2(n, 1e300);
    ks::min_distance_update(batch.data(), 2, c, d1);
    kp::min_distance_update(batch.data(), 2, c, d2);
    CHECK(d1 == d2);
  }

  TEST_CASE("parallel kernels do not depend on the thread count") {
    ThreadGuard guard;
    const SampleBatch batch = sample(GaussianSpace(2), n, 4);
    const TestField f = sample_field();
    std::vector<double> w(n, 1.0);
    omp_set_num_threads(1);
    const auto one = kp::dual_sums(f, batch, w, true);
    const auto hits1 = kp::ball_hits(make_ball({0.0, 0.0}, 1.0), Vec{1.0, 0.0}, 0.1, n, 3);
    omp_set_num_threads(4);
    const auto four = kp::dual_sums(f, batch, w, true);
    const auto hits4 = kp::ball_hits(make_ball({0.0, 0.0}, 1.0), Vec{1.0, 0.0}, 0.1, n, 3);
    CHECK(one.objective.mean() == four.objective.mean());
    CHECK(one.objective.std_error() == four.objective.std_error());
    CHECK(one.gradient == four.gradient);
    CHECK(hits1 == hits4);
  }

  TEST_CASE("uniform_in_ball stays in the ball and fills it uniformly") {
    const Vec c = {0.5, -0.5, 1.0};
    const double r = 0.25;
    Vec x(3);
    std::size_t inner = 0;
    const std::size_t m = 40000;
    for (std::size_t i = 0; i < m; ++i) {
      kernels::uniform_in_ball(17, i, c, r, x);
      const double d = std::sqrt(distance_sq(x, c));
      CHECK(d <= r * (1 + 1e-12));
      if (d <= r / 2) ++inner;
    }
    // volume fraction of the half-radius ball in R^3 is 1/8
    const double frac = static_cast<double>(inner) / m;
    CHECK(std::abs(frac - 0.125) < 4.0 * std::sqrt(0.125 * 0.875 / m));
  }
}
