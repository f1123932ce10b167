#include <cmath>

#include "doctest.h"
#include "gpm/hermite.hpp"
#include "gpm/rng.hpp"
#include "gpm/test_field.hpp"

using namespace gpm;

namespace {

TestField random_field(int dim, int degree, NormControl control, std::uint64_t seed, double scale) {
  TestField f(dim, degree, dim, control);
  Vec p = f.parameters();
  CounterRng rng(seed, 0);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) p[i] = scale * rng.normal();
  p.back() = 0.3;
  f.set_parameters(p);
  return f;
}

// -div G + <G, z> with the divergence taken by central differences.
double divergence_star_fd(const TestField& f, const Vec& z) {
  const double h = 1e-5;
  double div = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    Vec a = z, b = z;
    a[i] += h;
    b[i] -= h;
    div += (f.value(a)[i] - f.value(b)[i]) / (2 * h);
  }
  return -div + dot(f.value(z), z);
}

}  // namespace

TEST_SUITE("test-field") {
  TEST_CASE("hermite polynomials match the three-term recurrence") {
    for (double x : {-2.5, -0.3, 0.0, 1.7}) {
      double hm1 = 1.0, h = x;  // He_0, He_1
      CHECK(hermite_he(0, x) == doctest::Approx(1.0));
      CHECK(hermite_he(1, x) == doctest::Approx(x));
      for (int n = 1; n < 8; ++n) {
        const double next = x * h - n * hm1;
        hm1 = h;
        h = next;
        CHECK(hermite_he(n + 1, x) == doctest::Approx(h).epsilon(1e-12));
      }
      double norm[8];
      hermite_normalized(x, 7, norm);
      for (int n = 0; n <= 7; ++n) CHECK(norm[n] == doctest::Approx(hermite_he(n, x) / std::sqrt(std::tgamma(n + 1.0))));
    }
  }

  TEST_CASE("basis enumerates multi-indices of bounded total degree") {
    const HermiteBasis b(3, 4);
    CHECK(b.size() == HermiteBasis::count(3, 4));
    CHECK(b.size() == 35);  // C(3 + 4, 4)
    for (std::size_t t = 0; t < b.size(); ++t) {
      const auto alpha = b.multi_index(t);
      int total = 0;
      for (int a : alpha) total += a;
      CHECK(total <= 4);
      CHECK(b.index_of(alpha) == t);
    }
  }

  TEST_CASE("divergence star of simple fields") {
    const TestField e1 = TestField::constant(Vec{1.0, 0.0});
    CHECK(e1.divergence_star(Vec{2.0, 0.0}) == doctest::Approx(2.0));
    CHECK(e1.divergence_star(Vec{0.0, 0.0}) == 0.0);
    TestField lin(2, 1, 2, NormControl::none);
    lin.set_linear(0, 0, 1.0);
    CHECK(lin.divergence_star(Vec{0.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(lin.divergence_star(Vec{1.5, -2.0}) == doctest::Approx(-1.0 + 1.5 * 1.5));
  }

  TEST_CASE("divergence star agrees with a finite-difference divergence") {
    for (NormControl control : {NormControl::none, NormControl::smooth_clamp}) {
      for (int degree : {1, 3, 5}) {
        const TestField f = random_field(3, degree, control, 100 + static_cast<std::uint64_t>(degree), 0.4);
        CounterRng rng(8, 0);
        for (int k = 0; k < 10; ++k) {
          const Vec z = {rng.normal(), rng.normal(), rng.normal()};
          CHECK(f.divergence_star(z) == doctest::Approx(divergence_star_fd(f, z)).epsilon(1e-6));
        }
      }
    }
  }

  TEST_CASE("parameter gradient agrees with finite differences") {
    const TestField f = random_field(2, 4, NormControl::smooth_clamp, 21, 0.5);
    FieldWorkspace ws = f.make_workspace();
    Vec grad(f.parameter_count());
    const Vec z = {0.7, -1.1};
    f.divergence_star(z, ws, grad);
    const Vec p0 = f.parameters();
    for (std::size_t i = 0; i < p0.size(); ++i) {
      const double h = 1e-6;
      TestField a = f, b = f;
      Vec pa = p0, pb = p0;
      pa[i] += h;
      pb[i] -= h;
      a.set_parameters(pa);
      b.set_parameters(pb);
      const double fd = (a.divergence_star(z) - b.divergence_star(z)) / (2 * h);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }

  TEST_CASE("smooth clamp keeps the field inside the unit ball") {
    const TestField f = random_field(2, 3, NormControl::smooth_clamp, 4, 20.0);
    CounterRng rng(6, 0);
    for (int k = 0; k < 5000; ++k) {
      const Vec z = {3.0 * rng.normal(), 3.0 * rng.normal()};
      CHECK(norm(f.value(z)) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("component restriction zeroes the tail coordinates") {
    TestField f(3, 2, 1, NormControl::smooth_clamp);
    Vec p = f.parameters();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) p[i] = 0.1 * static_cast<double>(i + 1);
    f.set_parameters(p);
    const Vec g = f.value(Vec{0.2, 0.4, -0.5});
    CHECK(g.size() == 3);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
  }
}
