#include "layerscope/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace layerscope {

namespace {

// 10-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 10> kGlNodes = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
    -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
    0.8650633666889845,  0.9739065285171717};
constexpr std::array<double, 10> kGlWeights = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
    0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

struct PanelEstimate {
  Complex integral;
  double magnitude = 0.0;  // integral of |amplitude|
};

class Integrator {
 public:
  Integrator(const RealFunction& phase, const ComplexFunction& amplitude, double lambda,
             const QuadratureOptions& options)
      : phase_(phase), amplitude_(amplitude), lambda_(lambda), options_(options) {}

  Complex integrate(double a, double b) {
    std::vector<std::pair<double, double>> panels;
    split_by_oscillation(a, b, panels);
    Complex total{};
    for (const auto& [l, r] : panels) total += refine(l, r, gauss(l, r), 0);
    return total;
  }

 private:
  PanelEstimate gauss(double l, double r) {
    const double half = 0.5 * (r - l);
    const double mid = 0.5 * (r + l);
    PanelEstimate e;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      const double t = mid + half * kGlNodes[i];
      const Complex amp = amplitude_(t);
      e.integral += kGlWeights[i] * amp * std::exp(kI * (lambda_ * phase_(t)));
      e.magnitude += kGlWeights[i] * std::abs(amp);
    }
    e.integral *= half;
    e.magnitude *= half;
    return e;
  }

  void count_panel() {
    if (++panels_ > options_.max_panels) {
      throw std::runtime_error("oscillatory_quadrature: panel budget exceeded");
    }
  }

  // Bisect until lambda * (phase variation) over each panel is at most pi/2.
  void split_by_oscillation(double l, double r, std::vector<std::pair<double, double>>& out) {
    constexpr int kSamples = 9;
    double variation = 0.0;
    double prev = phase_(l);
    for (int s = 1; s < kSamples; ++s) {
      const double cur = phase_(l + (r - l) * s / (kSamples - 1));
      variation += std::abs(cur - prev);
      prev = cur;
    }
    if (lambda_ * variation > 0.5 * kPi && (r - l) > 1e-12 * std::max(1.0, std::abs(l))) {
      const double m = 0.5 * (l + r);
      split_by_oscillation(l, m, out);
      split_by_oscillation(m, r, out);
      return;
    }
    count_panel();
    out.emplace_back(l, r);
  }

  Complex refine(double l, double r, const PanelEstimate& whole, int depth) {
    const double m = 0.5 * (l + r);
    const PanelEstimate left = gauss(l, m);
    const PanelEstimate right = gauss(m, r);
    const Complex sum = left.integral + right.integral;
    const double tol = options_.relative_tolerance * std::max(whole.magnitude, 1e-300);
    if (std::abs(sum - whole.integral) <= tol || depth >= 60 ||
        (r - l) <= 1e-14 * std::max(1.0, std::abs(m))) {
      return sum;
    }
    count_panel();
    return refine(l, m, left, depth + 1) + refine(m, r, right, depth + 1);
  }

  const RealFunction& phase_;
  const ComplexFunction& amplitude_;
  double lambda_;
  QuadratureOptions options_;
  std::size_t panels_ = 0;
};

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

Complex leading_factor(double radius, double k) {
  return std::exp(kI * (k * radius)) / std::sqrt(radius) * std::exp(-kI * (kPi / 4.0)) *
         std::sqrt(kTwoPi / k);
}

void check_observation(const Point& x, const MediumPair& media, const char* who) {
  const double r = x.norm();
  if (!(r >= 20.0 / media.k_plus())) {
    throw std::invalid_argument(std::string(who) + ": |x| must be at least 20 / k_plus");
  }
  const double theta = std::atan2(x.x2, x.x1);
  const double slack = 1e-12;
  if (!(theta >= kExpansionMargin - slack && theta <= kPi - kExpansionMargin + slack)) {
    throw std::invalid_argument(std::string(who) + ": observation angle too close to 0 or pi");
  }
}

}  // namespace

Complex oscillatory_quadrature(const RealFunction& phase, const ComplexFunction& amplitude, double a,
                               double b, double lambda, std::span<const double> breakpoints,
                               const QuadratureOptions& options) {
  if (!(lambda > 0.0)) throw std::invalid_argument("oscillatory_quadrature: lambda must be positive");
  if (!(a < b)) throw std::invalid_argument("oscillatory_quadrature: need a < b");
  std::vector<double> edges{a};
  for (double t : breakpoints) {
    if (t > a && t < b) edges.push_back(t);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  Integrator integrator(phase, amplitude, lambda, options);
  Complex total{};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] > edges[i]) total += integrator.integrate(edges[i], edges[i + 1]);
  }
  return total;
}

FresnelReport fresnel_check(double a, double b, double lambda) {
  require(a < 0.0 && b > 0.0, "fresnel_check: need a < 0 < b");
  require(lambda > 0.0, "fresnel_check: lambda must be positive");
  FresnelReport rep;
  rep.a = a;
  rep.b = b;
  rep.lambda = lambda;
  rep.numeric = oscillatory_quadrature([](double eta) { return -0.5 * eta * eta; },
                                       [](double) { return Complex{1.0, 0.0}; }, a, b, lambda);
  rep.leading = std::exp(-kI * (kPi / 4.0)) * std::sqrt(kTwoPi / lambda);
  rep.residual = std::abs(rep.numeric - rep.leading);
  rep.bound = 2.0 / lambda * (1.0 / std::abs(a) + 1.0 / b);
  rep.holds = rep.residual <= rep.bound;
  return rep;
}

VanDerCorputReport vdc_bound_check(const RealFunction& phase, const ComplexFunction& amplitude,
                                   double a, double b, int pieces, double lambda) {
  require(a < b, "vdc_bound_check: need a < b");
  require(lambda > 0.0, "vdc_bound_check: lambda must be positive");
  require(pieces >= 1, "vdc_bound_check: pieces must be positive");

  constexpr int kSamples = 4001;
  const double step = (b - a) / (kSamples - 1);
  const double fd = 1e-6 * (b - a);
  std::vector<double> slope(kSamples);
  for (int s = 0; s < kSamples; ++s) {
    const double t = std::clamp(a + s * step, a + fd, b - fd);
    slope[static_cast<std::size_t>(s)] = (phase(t + fd) - phase(t - fd)) / (2.0 * fd);
    if (std::abs(slope[static_cast<std::size_t>(s)]) < 1.0 - 1e-6) {
      throw std::invalid_argument("vdc_bound_check: |u'| >= 1 violated");
    }
  }
  // Count the monotone pieces of u' from sign changes of its increments.
  int found = 1;
  int trend = 0;
  const double scale =
      *std::max_element(slope.begin(), slope.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  const double flat = 1e-9 * std::max(1.0, std::abs(scale));
  for (std::size_t s = 1; s < slope.size(); ++s) {
    const double d = slope[s] - slope[s - 1];
    if (std::abs(d) <= flat) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (trend != 0 && sign != trend) ++found;
    trend = sign;
  }
  if (found > pieces) {
    throw std::invalid_argument("vdc_bound_check: u' has more monotone pieces than supplied");
  }

  VanDerCorputReport rep;
  rep.lambda = lambda;
  rep.pieces = pieces;
  constexpr int kVariationSamples = 20001;
  Complex prev = amplitude(a);
  for (int s = 1; s < kVariationSamples; ++s) {
    const Complex cur = amplitude(a + (b - a) * s / (kVariationSamples - 1));
    rep.variation += std::abs(cur - prev);
    prev = cur;
  }
  rep.numeric = std::abs(oscillatory_quadrature(phase, amplitude, a, b, lambda));
  rep.bound = (2.0 * pieces + 2.0) / lambda * (std::abs(amplitude(b)) + rep.variation);
  rep.holds = rep.numeric <= rep.bound;
  return rep;
}

RemainderScalingReport remainder_scaling_check(const RealFunction& p, const ComplexFunction& q,
                                               double t, double a, double b,
                                               std::span<const double> lambdas) {
  require(a < 0.0 && b > 0.0, "remainder_scaling_check: need a < 0 < b");
  require(!lambdas.empty(), "remainder_scaling_check: need at least one lambda");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    require(lambdas[i] > 0.0, "remainder_scaling_check: lambdas must be positive");
    require(i == 0 || lambdas[i] > lambdas[i - 1], "remainder_scaling_check: lambdas must increase");
  }
  auto f = [&](double eta) { return q(eta) * std::exp(kI * (t * p(eta))); };
  const Complex f0 = f(0.0);
  const ComplexFunction amplitude = [&](double eta) { return f(eta) - f0; };

  double amp_scale = 0.0;
  for (int s = 0; s <= 1000; ++s) amp_scale = std::max(amp_scale, std::abs(amplitude(a + (b - a) * s / 1000.0)));
  const double floor = 1e-12 * (1.0 + amp_scale);

  RemainderScalingReport rep;
  rep.lambdas.assign(lambdas.begin(), lambdas.end());
  for (double lambda : lambdas) {
    const Complex value = oscillatory_quadrature([](double eta) { return -0.5 * eta * eta; },
                                                 amplitude, a, b, lambda);
    rep.integrals.push_back(value);
    rep.scaled.push_back(std::abs(value) * lambda);
  }
  const auto [lo, hi] = std::minmax_element(rep.scaled.begin(), rep.scaled.end());
  if (*hi <= floor) {
    rep.band_ratio = 0.0;
    rep.holds = true;
  } else {
    rep.band_ratio = *lo > floor ? *hi / *lo : std::numeric_limits<double>::infinity();
    rep.holds = rep.band_ratio <= 4.0;
  }
  return rep;
}

ExpansionReport mirror_wave_expansion_check(const Point& x, const Point& z, const MediumPair& media) {
  check_observation(x, media, "mirror_wave_expansion_check");
  const double k = media.k_plus();
  const Point xm = x.mirrored();
  const Point zm = z.mirrored();
  const Point diff{xm.x1 - zm.x1, xm.x2 - zm.x2};
  ExpansionReport rep{x, z, {}, {}, 0.0};
  rep.quadrature = -oscillatory_quadrature(
      [diff](double th) { return diff.x1 * std::cos(th) + diff.x2 * std::sin(th); },
      [](double) { return Complex{1.0, 0.0}; }, kPi, kTwoPi, k);
  const double r = x.norm();
  const Point xhat{x.x1 / r, x.x2 / r};
  rep.leading = -leading_factor(r, k) * std::exp(-kI * (k * xhat.dot(z)));
  rep.error = std::abs(rep.quadrature - rep.leading);
  return rep;
}

ExpansionReport reflected_wave_expansion_check(const Point& x, const Point& z,
                                               const MediumPair& media) {
  check_observation(x, media, "reflected_wave_expansion_check");
  const double theta = std::atan2(x.x2, x.x1);
  std::vector<double> breaks;
  if (const auto tc = media.critical_angle()) {
    const double slack = 1e-12;
    if (std::abs(theta - *tc) < kExpansionMargin - slack ||
        std::abs(theta - (kPi - *tc)) < kExpansionMargin - slack) {
      throw std::invalid_argument("reflected_wave_expansion_check: too close to a critical angle");
    }
    breaks = {kPi + *tc, kTwoPi - *tc};
  }
  const double k = media.k_plus();
  const double n = media.ratio();
  const Point xm = x.mirrored();
  const Point diff{xm.x1 - z.x1, xm.x2 - z.x2};
  ExpansionReport rep{x, z, {}, {}, 0.0};
  rep.quadrature = oscillatory_quadrature(
      [diff](double th) { return diff.x1 * std::cos(th) + diff.x2 * std::sin(th); },
      [n](double th) { return reflection_coeff_incident(th, n); }, kPi, kTwoPi, k, breaks);
  const double r = x.norm();
  const Point xhat{x.x1 / r, x.x2 / r};
  rep.leading = leading_factor(r, k) * reflection_coeff(theta, n) *
                std::exp(-kI * (k * xhat.dot(z.mirrored())));
  rep.error = std::abs(rep.quadrature - rep.leading);
  return rep;
}

std::vector<double> expansion_angles(const MediumPair& media, int count) {
  require(count >= 1, "expansion_angles: count must be positive");
  const double lo = kExpansionMargin;
  const double hi = kPi - kExpansionMargin;
  const auto tc = media.critical_angle();
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double theta = lo + (hi - lo) * (i + 0.5) / count;
    if (tc && (std::abs(theta - *tc) < kExpansionMargin ||
               std::abs(theta - (kPi - *tc)) < kExpansionMargin)) {
      continue;
    }
    out.push_back(theta);
  }
  return out;
}

ExpansionSweep expansion_sweep(ExpansionKind kind, const MediumPair& media, const Point& z,
                               std::span<const double> scaled_radii, int angle_count) {
  require(!scaled_radii.empty(), "expansion_sweep: need radii");
  ExpansionSweep sweep;
  sweep.angles = expansion_angles(media, angle_count);
  require(!sweep.angles.empty(), "expansion_sweep: every angle was excluded");
  const double k = media.k_plus();
  std::vector<double> log_r, log_m;
  for (double rho : scaled_radii) {
    const double r = rho / k;
    double err = 0.0;
    double mag = 0.0;
    for (double theta : sweep.angles) {
      const Point x{r * std::cos(theta), r * std::sin(theta)};
      const ExpansionReport rep = kind == ExpansionKind::MirrorWave
                                      ? mirror_wave_expansion_check(x, z, media)
                                      : reflected_wave_expansion_check(x, z, media);
      err += rep.error;
      mag += std::abs(rep.quadrature);
    }
    const double count = static_cast<double>(sweep.angles.size());
    sweep.scaled_radii.push_back(rho);
    sweep.mean_errors.push_back(err / count);
    sweep.mean_magnitudes.push_back(mag / count);
    log_r.push_back(std::log(r));
    log_m.push_back(std::log(mag / count));
  }
  for (std::size_t i = 0; i + 1 < sweep.mean_errors.size(); ++i) {
    sweep.ratios.push_back(sweep.mean_errors[i + 1] / sweep.mean_errors[i]);
  }
  if (log_r.size() >= 2) {
    const double n = static_cast<double>(log_r.size());
    const double mr = std::accumulate(log_r.begin(), log_r.end(), 0.0) / n;
    const double mm = std::accumulate(log_m.begin(), log_m.end(), 0.0) / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
      num += (log_r[i] - mr) * (log_m[i] - mm);
      den += (log_r[i] - mr) * (log_r[i] - mr);
    }
    sweep.magnitude_slope = num / den;
  }
  return sweep;
}

}  // namespace layerscope
