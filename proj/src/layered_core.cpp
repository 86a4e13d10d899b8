#include "layerscope/layered_core.hpp"

#include <cmath>
#include <stdexcept>

namespace layerscope {

double Point::norm() const { return std::hypot(x1, x2); }

MediumPair::MediumPair(double k_plus, double k_minus) : k_plus_(k_plus), k_minus_(k_minus) {
  if (!(k_plus > 0.0) || !(k_minus > 0.0) || !std::isfinite(k_plus) || !std::isfinite(k_minus)) {
    throw std::invalid_argument("MediumPair: wavenumbers must be positive and finite");
  }
  if (k_plus == k_minus) {
    throw std::invalid_argument("MediumPair: k_plus and k_minus must differ");
  }
}

std::optional<double> MediumPair::critical_angle() const {
  const double n = ratio();
  if (n < 1.0) return std::acos(n);
  return std::nullopt;
}

double canonical_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

Direction::Direction(double theta) : theta_(canonical_angle(theta)) {
  if (!std::isfinite(theta)) throw std::domain_error("Direction: angle must be finite");
  if (theta_ == 0.0 || theta_ == kPi) {
    throw std::domain_error("Direction: angles 0 and pi lie on the interface");
  }
  cos_ = std::cos(theta_);
  sin_ = std::sin(theta_);
}

Complex branch_factor_lower(double s) {
  const double r = std::sqrt(std::abs(s));
  return s > 0.0 ? Complex(r, 0.0) : Complex(0.0, -r);
}

Complex branch_factor_upper(double s) {
  const double r = std::sqrt(std::abs(s));
  return s > 0.0 ? Complex(r, 0.0) : Complex(0.0, r);
}

Complex s_branch(double t, double a) {
  if (!(a > 0.0)) throw std::domain_error("s_branch: a must be positive");
  // Real square roots only; at |t| = a the first branch yields exactly 0.
  if (std::abs(t) <= a) return {0.0, -std::sqrt((a - t) * (a + t))};
  return {std::sqrt((t - a) * (t + a)), 0.0};
}

namespace {

Complex reflection_from(double c, double s_theta, double n) {
  if (!(n > 0.0)) throw std::domain_error("reflection_coeff: n must be positive");
  const Complex s = s_branch(c, n);
  const Complex is{0.0, s_theta};
  const Complex den = is - s;
  if (den == Complex{0.0, 0.0}) throw std::domain_error("reflection_coeff: singular denominator");
  return (is + s) / den;
}

}  // namespace

Complex reflection_coeff(double theta, double n) {
  return reflection_from(std::cos(theta), std::sin(theta), n);
}

Complex transmission_coeff(double theta, double n) { return reflection_coeff(theta, n) + 1.0; }

Complex reflection_coeff_incident(double theta_d, double n) {
  // cos and sin of theta_d + pi without rounding the shifted angle.
  return reflection_from(-std::cos(theta_d), -std::sin(theta_d), n);
}

// ---------------------------------------------------------------------------

ReferenceWave::ReferenceWave(const Direction& d, const MediumPair& media)
    : d_(d), k_plus_(media.k_plus()) {
  if (d.half() != HalfPlane::Lower) {
    throw std::domain_error("ReferenceWave: incidence direction must point downward");
  }
  const double n = media.ratio();
  reflection_ = reflection_coeff_incident(d.theta(), n);
  transmission_ = reflection_ + 1.0;
  branch_ = s_branch(d.cos(), n);
}

Complex ReferenceWave::incident(const Point& x) const {
  return std::exp(kI * (k_plus_ * (x.x1 * d_.cos() + x.x2 * d_.sin())));
}

Complex ReferenceWave::upper_value(const Point& x) const {
  const double along = k_plus_ * x.x1 * d_.cos();
  const double across = k_plus_ * x.x2 * d_.sin();
  return std::exp(kI * (along + across)) + reflection_ * std::exp(kI * (along - across));
}

// k- x.d^t = k+ (x1 cos theta_d - i x2 S(cos theta_d, n)), so the lower
// branch is exp(i k+ x1 cos theta_d + k+ x2 S).
Complex ReferenceWave::lower_value(const Point& x) const {
  return transmission_ * std::exp(kI * (k_plus_ * x.x1 * d_.cos()) + k_plus_ * x.x2 * branch_);
}

ComplexGradient ReferenceWave::upper_gradient(const Point& x) const {
  const double along = k_plus_ * x.x1 * d_.cos();
  const double across = k_plus_ * x.x2 * d_.sin();
  const Complex inc = std::exp(kI * (along + across));
  const Complex refl = reflection_ * std::exp(kI * (along - across));
  const Complex ik = kI * k_plus_;
  return {ik * d_.cos() * (inc + refl), ik * d_.sin() * (inc - refl)};
}

ComplexGradient ReferenceWave::lower_gradient(const Point& x) const {
  const Complex v = lower_value(x);
  return {kI * k_plus_ * d_.cos() * v, k_plus_ * branch_ * v};
}

Complex ReferenceWave::value(const Point& x) const {
  return x.x2 >= 0.0 ? upper_value(x) : lower_value(x);
}

ComplexGradient ReferenceWave::gradient(const Point& x) const {
  return x.x2 >= 0.0 ? upper_gradient(x) : lower_gradient(x);
}

Complex reference_field(const Point& x, const Direction& d, const MediumPair& media) {
  return ReferenceWave(d, media).value(x);
}

ComplexGradient reference_gradient(const Point& x, const Direction& d, const MediumPair& media) {
  return ReferenceWave(d, media).gradient(x);
}

// ---------------------------------------------------------------------------

FarFieldKernel::FarFieldKernel(const Direction& xhat, const MediumPair& media)
    : xhat_(xhat), k_plus_(media.k_plus()) {
  if (xhat.half() != HalfPlane::Upper) {
    throw std::domain_error("FarFieldKernel: observation direction must point upward");
  }
  const double n = media.ratio();
  prefactor_ = std::exp(kI * (kPi / 4.0)) / std::sqrt(8.0 * kPi * k_plus_);
  reflection_ = reflection_coeff(xhat.theta(), n);
  transmission_ = reflection_ + 1.0;
  branch_ = s_branch(xhat.cos(), n);
}

Complex FarFieldKernel::upper_value(const Point& y) const {
  const double along = k_plus_ * y.x1 * xhat_.cos();
  const double across = k_plus_ * y.x2 * xhat_.sin();
  return prefactor_ *
         (std::exp(-kI * (along + across)) + reflection_ * std::exp(-kI * (along - across)));
}

// -i k+ (y1 cos + i y2 S) = -i k+ y1 cos + k+ y2 S.
Complex FarFieldKernel::lower_value(const Point& y) const {
  return prefactor_ * transmission_ *
         std::exp(-kI * (k_plus_ * y.x1 * xhat_.cos()) + k_plus_ * y.x2 * branch_);
}

Complex FarFieldKernel::value(const Point& y) const {
  return y.x2 >= 0.0 ? upper_value(y) : lower_value(y);
}

ComplexGradient FarFieldKernel::gradient(const Point& y) const {
  if (y.x2 >= 0.0) {
    const double along = k_plus_ * y.x1 * xhat_.cos();
    const double across = k_plus_ * y.x2 * xhat_.sin();
    const Complex direct = prefactor_ * std::exp(-kI * (along + across));
    const Complex mirror = prefactor_ * reflection_ * std::exp(-kI * (along - across));
    const Complex mik = -kI * k_plus_;
    return {mik * xhat_.cos() * (direct + mirror), mik * xhat_.sin() * (direct - mirror)};
  }
  const Complex v = lower_value(y);
  return {-kI * k_plus_ * xhat_.cos() * v, k_plus_ * branch_ * v};
}

Complex FarFieldKernel::normal_derivative(const Point& y, const Point& normal) const {
  const ComplexGradient g = gradient(y);
  return g[0] * normal.x1 + g[1] * normal.x2;
}

Complex farfield_kernel(const Direction& xhat, const Point& y, const MediumPair& media) {
  return FarFieldKernel(xhat, media).value(y);
}

Complex farfield_kernel_normal(const Direction& xhat, const Point& y, const Point& normal,
                               const MediumPair& media) {
  return FarFieldKernel(xhat, media).normal_derivative(y, normal);
}

}  // namespace layerscope
