#include "layerscope/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace layerscope {

namespace {

constexpr double kCatalogSupport = 0.8;  // 4/5
constexpr double kSupportSq = 16.0 / 25.0;
constexpr double kExponentFloor = -700.0;

// exp[c/(x^2 - c)] with c = s^2 on |x| < s, and its derivative. The
// catalogued bump exp[16/(25 x^2 - 16)] is the case s = 4/5.
ProfileSample bump_factor(double x, double s) {
  const double c = s * s;
  const double den = x * x - c;
  if (!(den < 0.0)) return {};
  const double exponent = c / den;
  if (exponent < kExponentFloor) return {};
  const double e = std::exp(exponent);
  return {e, e * (-2.0 * x * c / (den * den))};
}

ProfileSample example1(double x) {
  if (std::abs(x) >= kCatalogSupport) return {};
  const double w = x * x - kSupportSq;
  const double arg = 2.0 * kPi * x / 3.0;
  const double s = std::sin(arg);
  const double h = 0.4 * std::sin(w * w) * s * s * s;
  const double dh = 0.4 * (std::cos(w * w) * 2.0 * w * 2.0 * x * s * s * s +
                           std::sin(w * w) * 3.0 * s * s * std::cos(arg) * 2.0 * kPi / 3.0);
  return {h, dh};
}

ProfileSample example2(double x) {
  if (std::abs(x) >= kCatalogSupport) return {};
  const double w = x * x - kSupportSq;
  const double w3 = w * w * w;
  const double g = std::exp(-x * x);
  const double s = std::sin(3.0 * kPi * x);
  const double c = std::cos(3.0 * kPi * x);
  const double h = 0.2 * std::sin(w3) * s * g;
  const double dh = 0.2 * (std::cos(w3) * 3.0 * w * w * 2.0 * x * s * g +
                           std::sin(w3) * (3.0 * kPi * c * g - 2.0 * x * s * g));
  return {h, dh};
}

ProfileSample example3(double x) {
  const ProfileSample b = bump_factor(x, kCatalogSupport);
  if (b.h == 0.0) return {};
  const double m = 0.5 + 0.1 * std::sin(16.0 * kPi * x);
  const double dm = 0.1 * 16.0 * kPi * std::cos(16.0 * kPi * x);
  return {0.2 * b.h * m, 0.2 * (b.h_prime * m + b.h * dm)};
}

ProfileSample example4(double x) {
  const ProfileSample b = bump_factor(x, kCatalogSupport);
  if (b.h == 0.0) return {};
  const double m = 0.5 + 0.1 * std::sin(10.0 * kPi * x) + 0.1 * std::cos(8.0 * kPi * x);
  const double dm =
      0.1 * 10.0 * kPi * std::cos(10.0 * kPi * x) - 0.1 * 8.0 * kPi * std::sin(8.0 * kPi * x);
  const double s = std::sin(kPi * x);
  const double ds = kPi * std::cos(kPi * x);
  return {0.2 * b.h * m * s, 0.2 * (b.h_prime * m * s + b.h * dm * s + b.h * m * ds)};
}

double sampled_bound(const SurfaceProfile& p) {
  constexpr int kSamples = 20001;
  const double s = p.support_halfwidth();
  double m = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = -s + 2.0 * s * i / (kSamples - 1);
    m = std::max(m, std::abs(p.height(x)));
  }
  // Padding covers the gap between samples (h' is bounded on the support).
  return 1.02 * m + 1e-12;
}

void require_no_params(const std::string& name, const std::map<std::string, double>& params) {
  if (!params.empty()) {
    throw std::invalid_argument("profile '" + name + "' takes no parameters (got '" +
                                params.begin()->first + "')");
  }
}

}  // namespace

ProfileSample SurfaceProfile::evaluate(double x1) const {
  switch (kind_) {
    case ProfileKind::Example1: return example1(x1);
    case ProfileKind::Example2: return example2(x1);
    case ProfileKind::Example3: return example3(x1);
    case ProfileKind::Example4: return example4(x1);
    case ProfileKind::Flat: return {};
    case ProfileKind::ScaledBump: {
      const ProfileSample b = bump_factor(x1, support_);
      return {amplitude_ * b.h, amplitude_ * b.h_prime};
    }
  }
  return {};
}

Side SurfaceProfile::classify(const Point& p, double on_tolerance) const {
  const double diff = p.x2 - height(p.x1);
  if (std::abs(diff) <= on_tolerance) return Side::On;
  return diff > 0.0 ? Side::Above : Side::Below;
}

bool SurfaceProfile::is_even() const {
  return kind_ == ProfileKind::Flat || kind_ == ProfileKind::ScaledBump;
}

SurfaceProfile make_profile(const std::string& name, const std::map<std::string, double>& params) {
  SurfaceProfile p;
  p.name_ = name;
  p.params_ = params;
  if (name == "example1" || name == "example2" || name == "example3" || name == "example4") {
    require_no_params(name, params);
    p.kind_ = name == "example1"   ? ProfileKind::Example1
              : name == "example2" ? ProfileKind::Example2
              : name == "example3" ? ProfileKind::Example3
                                   : ProfileKind::Example4;
    p.support_ = kCatalogSupport;
  } else if (name == "flat") {
    require_no_params(name, params);
    p.kind_ = ProfileKind::Flat;
    p.support_ = 0.0;
    p.amplitude_bound_ = 0.0;
    return p;
  } else if (name == "scaled_bump") {
    for (const auto& [key, value] : params) {
      if (key != "amplitude" && key != "support_halfwidth") {
        throw std::invalid_argument("scaled_bump: unknown parameter '" + key + "'");
      }
    }
    const auto amp = params.find("amplitude");
    const auto sup = params.find("support_halfwidth");
    if (amp == params.end() || sup == params.end()) {
      throw std::invalid_argument("scaled_bump: requires amplitude and support_halfwidth");
    }
    if (!(amp->second > 0.0) || !std::isfinite(amp->second)) {
      throw std::invalid_argument("scaled_bump: amplitude must be positive");
    }
    if (!(sup->second > 0.0) || !std::isfinite(sup->second)) {
      throw std::invalid_argument("scaled_bump: support_halfwidth must be positive");
    }
    p.kind_ = ProfileKind::ScaledBump;
    p.amplitude_ = amp->second;
    p.support_ = sup->second;
  } else {
    throw std::invalid_argument("unknown profile '" + name + "'");
  }
  p.amplitude_bound_ = sampled_bound(p);
  return p;
}

}  // namespace layerscope
