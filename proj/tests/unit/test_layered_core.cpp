#include <doctest.h>

#include <cmath>

#include "layerscope/layered_core.hpp"
#include "test_support.hpp"

using namespace layerscope;
using test_support::uniform;

TEST_CASE("medium pair validates wavenumbers and exposes the critical angle") {
  CHECK_THROWS_AS(MediumPair(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumPair(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumPair(3.0, 3.0), std::invalid_argument);
  CHECK_FALSE(MediumPair(6.0, 12.0).critical_angle().has_value());
  const auto tc = MediumPair(12.0, 6.0).critical_angle();
  REQUIRE(tc.has_value());
  CHECK(*tc == doctest::Approx(std::acos(0.5)).epsilon(1e-15));
  CHECK(*tc > 0.0);
  CHECK(*tc < kPi / 2.0);
}

TEST_CASE("points mirror as an involution") {
  const Point p{0.3, -1.7};
  CHECK(p.mirrored() == Point{0.3, 1.7});
  CHECK(p.mirrored().mirrored() == p);
}

TEST_CASE("directions are canonical unit vectors off the interface") {
  CHECK_THROWS_AS(Direction(0.0), std::domain_error);
  CHECK_THROWS_AS(Direction{kPi}, std::domain_error);
  CHECK_THROWS_AS(Direction{kTwoPi}, std::domain_error);
  const Direction d(-kPi / 2.0);
  CHECK(d.theta() == doctest::Approx(1.5 * kPi));
  CHECK(d.half() == HalfPlane::Lower);
  CHECK(Direction(1.0).half() == HalfPlane::Upper);
  CHECK(std::abs(d.unit().norm() - 1.0) < 1e-15);
  CHECK(Direction(0.4).opposite().theta() == doctest::Approx(0.4 + kPi));
}

TEST_CASE("branch function closed forms") {
  CHECK(std::abs(s_branch(0.0, 1.0) - Complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(s_branch(2.0, 1.0) - std::sqrt(3.0)) < 1e-15);
  CHECK(s_branch(1.0, 1.0) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(s_branch(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(s_branch(0.5, -1.0), std::domain_error);
}

TEST_CASE("branch function factorizes and is even in t") {
  Pcg32 rng(11, 0);
  double factor = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = uniform(rng, 0.05, 5.0);
    const double t = uniform(rng, -6.0, 6.0);
    const Complex s = s_branch(t, a);
    factor = std::max(factor, std::abs(s - branch_factor_lower(t - a) * branch_factor_upper(t + a)));
    CHECK(s == s_branch(-t, a));
  }
  CHECK(factor <= 1e-14);
}

TEST_CASE("reflection and transmission closed forms") {
  CHECK(std::abs(reflection_coeff(kPi / 2.0, 2.0) - (-1.0 / 3.0)) < 1e-15);
  CHECK(std::abs(reflection_coeff(kPi / 2.0, 0.5) - (1.0 / 3.0)) < 1e-15);
  CHECK(std::abs(std::abs(reflection_coeff(kPi / 6.0, 0.5)) - 1.0) < 1e-14);
  CHECK(std::abs(transmission_coeff(kPi / 2.0, 2.0) - (2.0 / 3.0)) < 1e-15);
  CHECK(std::abs(transmission_coeff(kPi / 2.0, 0.5) - (4.0 / 3.0)) < 1e-15);
  CHECK_THROWS_AS(reflection_coeff(1.0, 0.0), std::domain_error);
}

TEST_CASE("coefficient identities over random inputs") {
  Pcg32 rng(12, 0);
  for (int i = 0; i < 1000; ++i) {
    double n = uniform(rng, 0.1, 10.0);
    if (std::abs(n - 1.0) < 1e-3) n = 2.0;
    const double theta = uniform(rng, 1e-3, kPi - 1e-3);
    CHECK(transmission_coeff(theta, n) == reflection_coeff(theta, n) + 1.0);
    CHECK(std::abs(reflection_coeff(kPi / 2.0, n) - (1.0 - n) / (1.0 + n)) <= 1e-12);
    CHECK(std::abs(reflection_coeff_incident(kTwoPi - theta, n) - reflection_coeff(theta, n)) <= 1e-14);
    CHECK(std::abs(reflection_coeff_incident(theta + kPi, n) - reflection_coeff(theta, n)) <= 1e-14);
  }
}

TEST_CASE("total reflection has unit modulus") {
  Pcg32 rng(13, 0);
  for (int i = 0; i < 1000; ++i) {
    const double n = uniform(rng, 0.05, 0.99);
    const double c = uniform(rng, n + 1e-9, 1.0 - 1e-12) * (i % 2 == 0 ? 1.0 : -1.0);
    const double theta = std::acos(c);
    REQUIRE(std::abs(std::cos(theta)) > n);
    CHECK(std::abs(std::abs(reflection_coeff(theta, n)) - 1.0) <= 1e-13);
  }
}

TEST_CASE("reference wave at the origin for normal incidence") {
  const MediumPair media(1.0, 2.0);
  const Direction down(1.5 * kPi);
  CHECK(std::abs(reference_field({0.0, 0.0}, down, media) - (2.0 / 3.0)) < 1e-15);
  CHECK_THROWS_AS(ReferenceWave(Direction(1.0), media), std::domain_error);
}

TEST_CASE("reference wave transmission conditions on the planar interface") {
  Pcg32 rng(14, 0);
  for (int i = 0; i < 1000; ++i) {
    const MediumPair media(uniform(rng, 0.5, 20.0), uniform(rng, 0.5, 20.0) + 1e-4);
    const ReferenceWave u0(Direction(uniform(rng, kPi + 1e-3, kTwoPi - 1e-3)), media);
    const Point x{uniform(rng, -5.0, 5.0), 0.0};
    CHECK(std::abs(u0.upper_value(x) - u0.lower_value(x)) <= 1e-13);
    const auto gu = u0.upper_gradient(x);
    const auto gl = u0.lower_gradient(x);
    CHECK(std::abs(gu[1] - gl[1]) <= 1e-12 * media.k_plus());
    CHECK(u0.value(x) == u0.upper_value(x));
  }
}

TEST_CASE("reference wave gradient matches a central-difference oracle") {
  Pcg32 rng(15, 0);
  for (int i = 0; i < 200; ++i) {
    const MediumPair media(uniform(rng, 1.0, 10.0), uniform(rng, 1.0, 10.0) + 1e-3);
    const Direction d(uniform(rng, kPi + 1e-2, kTwoPi - 1e-2));
    const Point x{uniform(rng, -2.0, 2.0), uniform(rng, 0.1, 2.0) * (i % 2 == 0 ? 1.0 : -1.0)};
    const double step = 1e-6;
    const Complex d1 = (reference_field({x.x1 + step, x.x2}, d, media) -
                        reference_field({x.x1 - step, x.x2}, d, media)) / (2.0 * step);
    const Complex d2 = (reference_field({x.x1, x.x2 + step}, d, media) -
                        reference_field({x.x1, x.x2 - step}, d, media)) / (2.0 * step);
    const auto g = reference_gradient(x, d, media);
    const double scale = 10.0 * std::max(1.0, std::abs(reference_field(x, d, media)));
    CHECK(std::abs(g[0] - d1) <= 1e-6 * scale);
    CHECK(std::abs(g[1] - d2) <= 1e-6 * scale);
  }
}

TEST_CASE("reference wave solves the Helmholtz equation on each side at second order") {
  Pcg32 rng(16, 0);
  for (int side = 0; side < 2; ++side) {
    for (int i = 0; i < 10; ++i) {
      const MediumPair media(uniform(rng, 2.0, 12.0), uniform(rng, 2.0, 12.0) + 1e-3);
      const ReferenceWave u0(Direction(uniform(rng, kPi + 0.1, kTwoPi - 0.1)), media);
      const double sign = side == 0 ? 1.0 : -1.0;
      const Point x{uniform(rng, -1.0, 1.0), sign * uniform(rng, 0.3, 1.0)};
      const double k = side == 0 ? media.k_plus() : media.k_minus();
      auto residual = [&](double h) {
        const Complex lap = (u0.value({x.x1 + h, x.x2}) + u0.value({x.x1 - h, x.x2}) +
                             u0.value({x.x1, x.x2 + h}) + u0.value({x.x1, x.x2 - h}) - 4.0 * u0.value(x)) /
                            (h * h);
        return std::abs(lap + k * k * u0.value(x));
      };
      const double h = 0.2 / std::max(media.k_plus(), media.k_minus());
      CHECK(std::log2(residual(h) / residual(0.5 * h)) >= 1.9);
    }
  }
}

TEST_CASE("far-field kernel closed form and branch agreement") {
  const MediumPair media(1.0, 2.0);
  const Complex expected = std::exp(kI * (kPi / 4.0)) / std::sqrt(8.0 * kPi) * (2.0 / 3.0);
  CHECK(std::abs(farfield_kernel(Direction(kPi / 2.0), {0.0, 0.0}, media) - expected) < 1e-15);
  CHECK_THROWS_AS(FarFieldKernel(Direction(4.0), media), std::domain_error);

  Pcg32 rng(17, 0);
  for (int i = 0; i < 1000; ++i) {
    const MediumPair m(uniform(rng, 0.5, 20.0), uniform(rng, 0.5, 20.0) + 1e-4);
    const FarFieldKernel g(Direction(uniform(rng, 1e-3, kPi - 1e-3)), m);
    const Point y{uniform(rng, -5.0, 5.0), 0.0};
    CHECK(std::abs(g.upper_value(y) - g.lower_value(y)) <= 1e-13);
  }
}

TEST_CASE("far-field kernel equals the scaled reference wave for the reversed direction") {
  Pcg32 rng(18, 0);
  for (int i = 0; i < 1000; ++i) {
    const MediumPair media(uniform(rng, 0.5, 20.0), uniform(rng, 0.5, 20.0) + 1e-4);
    const Direction xhat(uniform(rng, 1e-3, kPi - 1e-3));
    const Point y{uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0)};
    const Complex c = std::exp(kI * (kPi / 4.0)) / std::sqrt(8.0 * kPi * media.k_plus());
    CHECK(std::abs(farfield_kernel(xhat, y, media) - c * reference_field(y, xhat.opposite(), media)) <= 1e-12);
  }
}

TEST_CASE("far-field kernel decays into the lower medium beyond the critical angle") {
  const MediumPair media(10.0, 5.0);
  const FarFieldKernel g(Direction(0.3), media);  // |cos 0.3| > n = 0.5
  const double a = std::abs(g.lower_value({0.2, -1.0}));
  const double b = std::abs(g.lower_value({0.2, -2.0}));
  const double c = std::abs(g.lower_value({0.2, -4.0}));
  CHECK(a > b);
  CHECK(b > c);
}

TEST_CASE("far-field kernel normal derivative matches a central-difference oracle") {
  Pcg32 rng(19, 0);
  for (int i = 0; i < 200; ++i) {
    const MediumPair media(uniform(rng, 1.0, 10.0), uniform(rng, 1.0, 10.0) + 1e-3);
    const Direction xhat(uniform(rng, 0.05, kPi - 0.05));
    const double phi = uniform(rng, 0.0, kTwoPi);
    const Point y{1.3 * std::cos(phi), 1.3 * std::sin(phi)};
    if (std::abs(y.x2) < 1e-3) continue;
    const Point nu{std::cos(phi), std::sin(phi)};
    const double step = 1e-6;
    const Complex fd = (farfield_kernel(xhat, {y.x1 + step * nu.x1, y.x2 + step * nu.x2}, media) -
                        farfield_kernel(xhat, {y.x1 - step * nu.x1, y.x2 - step * nu.x2}, media)) /
                       (2.0 * step);
    CHECK(std::abs(farfield_kernel_normal(xhat, y, nu, media) - fd) <= 1e-6);
  }
}
