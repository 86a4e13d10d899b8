#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "layerscope/asymptotics.hpp"

using namespace layerscope;

namespace {

Complex kronrod(const std::function<Complex(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([&](double t) { return f(t).real(); }, a, b, 20, 1e-14);
  const double im = gauss_kronrod<double, 61>::integrate([&](double t) { return f(t).imag(); }, a, b, 20, 1e-14);
  return {re, im};
}

}  // namespace

TEST_CASE("oscillatory quadrature on elementary integrals") {
  const Complex one = oscillatory_quadrature([](double) { return 0.0; }, [](double) { return Complex{1.0, 0.0}; },
                                             0.0, 1.0, 10.0);
  CHECK(std::abs(one - 1.0) <= 1e-14);
  const Complex zero = oscillatory_quadrature([](double t) { return t; }, [](double) { return Complex{1.0, 0.0}; },
                                              0.0, kTwoPi, 5.0);
  CHECK(std::abs(zero) <= 1e-12);
  const Complex lin = oscillatory_quadrature([](double t) { return t; }, [](double t) { return Complex{t, 0.0}; },
                                             0.0, 1.0, 50.0);
  const Complex i50 = kI * 50.0;
  const Complex exact = std::exp(i50) / i50 - (std::exp(i50) - 1.0) / (i50 * i50);
  CHECK(std::abs(lin - exact) <= 1e-12);
  CHECK_THROWS_AS(oscillatory_quadrature([](double t) { return t; }, [](double) { return Complex{1.0, 0.0}; }, 1.0,
                                         0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("oscillatory quadrature agrees with adaptive Gauss-Kronrod") {
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{-1.0, 1.0}, {-1.0, 2.0}, {-0.5, 3.0}}) {
    const double lambda = 100.0;
    const Complex ours = oscillatory_quadrature([](double e) { return -0.5 * e * e; },
                                                [](double) { return Complex{1.0, 0.0}; }, a, b, lambda);
    const Complex ref = kronrod([&](double e) { return std::exp(-kI * (0.5 * lambda * e * e)); }, a, b);
    CHECK(std::abs(ours - ref) <= 1e-10);
  }
}

TEST_CASE("stationary-phase estimate for the Fresnel integral") {
  const FresnelReport r = fresnel_check(-1.0, 1.0, 100.0);
  CHECK(r.bound == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(r.residual <= r.bound);
  CHECK(r.holds);
  CHECK(std::abs(r.leading - std::exp(-kI * (kPi / 4.0)) * std::sqrt(kTwoPi / 100.0)) <= 1e-15);
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{-1.0, 1.0}, {-1.0, 2.0}, {-0.5, 3.0}}) {
    for (double lambda : {10.0, 100.0, 1000.0}) {
      const FresnelReport lo = fresnel_check(a, b, lambda);
      const FresnelReport hi = fresnel_check(a, b, 4.0 * lambda);
      CHECK(lo.holds);
      CHECK(hi.holds);
      CHECK(hi.residual / lo.residual <= 0.6);
    }
  }
  CHECK_THROWS_AS(fresnel_check(0.5, 1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(fresnel_check(-1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("first-derivative bound for non-stationary phases") {
  const VanDerCorputReport lin =
      vdc_bound_check([](double t) { return t; }, [](double) { return Complex{1.0, 0.0}; }, 0.0, 1.0, 1, 100.0);
  CHECK(lin.holds);
  CHECK(lin.numeric == doctest::Approx(std::abs(2.0 * std::sin(50.0) / 100.0)).epsilon(1e-10));
  CHECK(lin.bound == doctest::Approx(4.0 / 100.0).epsilon(1e-12));

  auto phase = [](double t) { return 0.5 * t * t + t; };
  auto amp = [](double t) { return Complex{t, 0.0}; };
  const VanDerCorputReport a = vdc_bound_check(phase, amp, 0.0, 2.0, 1, 100.0);
  const VanDerCorputReport b = vdc_bound_check(phase, amp, 0.0, 2.0, 1, 300.0);
  CHECK(a.holds);
  CHECK(b.holds);
  CHECK(a.variation == doctest::Approx(2.0).epsilon(1e-6));
  const double ratio = b.numeric / a.numeric;
  CHECK(ratio >= 0.2);
  CHECK(ratio <= 0.5);

  CHECK_THROWS_AS(vdc_bound_check([](double t) { return 0.5 * t * t; }, amp, 0.0, 1.0, 1, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(vdc_bound_check([](double t) { return t * t * t / 3.0 + t; },
                                  [](double) { return Complex{1.0, 0.0}; }, -1.0, 1.0, 1, 10.0),
                  std::invalid_argument);
}

TEST_CASE("second-order remainder scales like one over lambda") {
  const std::vector<double> lambdas{1e2, 1e3, 1e4};
  const RemainderScalingReport even = remainder_scaling_check(
      [](double e) { return e; }, [](double e) { return Complex{std::cos(e), 0.0}; }, 2.0, -1.0, 2.0, lambdas);
  CHECK(even.holds);
  CHECK(even.band_ratio <= 4.0);
  CHECK(even.scaled.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(even.scaled[i] == doctest::Approx(std::abs(even.integrals[i]) * lambdas[i]));

  const RemainderScalingReport zero = remainder_scaling_check(
      [](double) { return 0.0; }, [](double) { return Complex{1.0, 0.0}; }, 1.0, -1.0, 1.0, lambdas);
  CHECK(zero.holds);
  CHECK(zero.band_ratio == 0.0);
  const std::vector<double> bad{1e3, 1e2};
  CHECK_THROWS_AS(remainder_scaling_check([](double e) { return e; }, [](double) { return Complex{1.0, 0.0}; }, 1.0,
                                          -1.0, 1.0, bad),
                  std::invalid_argument);
}

TEST_CASE("mirror-wave integral matches the Bessel function oracle") {
  const MediumPair media(6.0, 12.0);
  for (double kr : {25.0, 60.0, 150.0}) {
    const Point x{0.0, kr / media.k_plus()};
    const ExpansionReport r = mirror_wave_expansion_check(x, {0.0, 0.0}, media);
    // -integral over (pi, 2pi) of e^{-i kr sin t}: the real part is -pi J0(kr).
    CHECK(std::abs(r.quadrature.real() + kPi * std::cyl_bessel_j(0.0, kr)) <= 1e-10);
    CHECK(std::abs(r.leading) == doctest::Approx(std::sqrt(kTwoPi / media.k_plus()) / std::sqrt(x.norm())));
    CHECK(r.error <= 0.2 * std::abs(r.leading));
  }
}

TEST_CASE("reflected-wave leading magnitude at the vertical") {
  for (const MediumPair media : {MediumPair(6.0, 12.0), MediumPair(12.0, 6.0)}) {
    const double k = media.k_plus();
    const Point x{0.0, 100.0 / k};
    const ExpansionReport r = reflected_wave_expansion_check(x, {0.0, 0.0}, media);
    const double expected = std::sqrt(kTwoPi / k) * std::abs(reflection_coeff(kPi / 2.0, media.ratio())) /
                            std::sqrt(x.norm());
    CHECK(std::abs(r.leading) == doctest::Approx(expected).epsilon(1e-13));
    // Endpoint terms are O(1 / (k |x|)), so quadrupling the radius cuts the error about fourfold.
    const ExpansionReport far = reflected_wave_expansion_check({0.0, 400.0 / k}, {0.0, 0.0}, media);
    CHECK(far.error / r.error <= 0.5);
    CHECK(far.error <= 0.2 * std::abs(far.leading));
  }
}

TEST_CASE("expansion preconditions") {
  const MediumPair media(6.0, 12.0);
  CHECK_THROWS_AS(mirror_wave_expansion_check({0.0, 1.0}, {0.0, 0.0}, media), std::invalid_argument);
  CHECK_THROWS_AS(mirror_wave_expansion_check({20.0, 0.5}, {0.0, 0.0}, media), std::invalid_argument);
  const MediumPair total(12.0, 6.0);  // critical angle pi/3
  const double tc = *total.critical_angle();
  const Point near{20.0 * std::cos(tc + 0.05), 20.0 * std::sin(tc + 0.05)};
  CHECK_THROWS_AS(reflected_wave_expansion_check(near, {0.0, 0.0}, total), std::invalid_argument);
  for (double t : expansion_angles(total, 16)) {
    CHECK(t >= kExpansionMargin - 1e-12);
    CHECK(t <= kPi - kExpansionMargin + 1e-12);
    CHECK(std::abs(t - tc) >= kExpansionMargin - 1e-12);
    CHECK(std::abs(t - (kPi - tc)) >= kExpansionMargin - 1e-12);
  }
}

TEST_CASE("expansion errors halve when the radius doubles") {
  const std::vector<double> radii{50.0, 100.0, 200.0};
  const ExpansionSweep s = expansion_sweep(ExpansionKind::MirrorWave, MediumPair(6.0, 12.0), {0.1, -0.05}, radii, 24);
  REQUIRE(s.ratios.size() == 2);
  for (double r : s.ratios) {
    CHECK(r >= 0.3);
    CHECK(r <= 0.7);
  }
  CHECK(std::abs(s.magnitude_slope + 0.5) <= 0.05);
}
