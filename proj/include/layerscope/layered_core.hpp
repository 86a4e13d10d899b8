#pragma once

// Closed-form building blocks of the unperturbed two-layered medium: the
// square-root branch function, planar reflection/transmission coefficients,
// the reference wave (incident + reflected above, transmitted below) and the
// far-field kernel used to extract far-field patterns from circle traces.

#include <array>
#include <complex>
#include <optional>

namespace layerscope {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr Complex kI{0.0, 1.0};

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  /// Reflection across the planar interface x2 = 0.
  [[nodiscard]] constexpr Point mirrored() const { return {x1, -x2}; }
  [[nodiscard]] double norm() const;
  [[nodiscard]] constexpr double dot(const Point& o) const { return x1 * o.x1 + x2 * o.x2; }

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

using ComplexGradient = std::array<Complex, 2>;

/// Wavenumbers of the upper (k+) and lower (k-) half-planes.
class MediumPair {
 public:
  MediumPair(double k_plus, double k_minus);

  [[nodiscard]] double k_plus() const { return k_plus_; }
  [[nodiscard]] double k_minus() const { return k_minus_; }
  /// n = k- / k+.
  [[nodiscard]] double ratio() const { return k_minus_ / k_plus_; }
  /// arccos(n), present only when n < 1.
  [[nodiscard]] std::optional<double> critical_angle() const;

 private:
  double k_plus_;
  double k_minus_;
};

enum class HalfPlane { Upper, Lower };

/// A unit direction (cos theta, sin theta), theta canonicalised to [0, 2pi).
/// Directions along the interface (theta = 0 or pi) are rejected.
class Direction {
 public:
  explicit Direction(double theta);

  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] Point unit() const { return {cos_, sin_}; }
  [[nodiscard]] double cos() const { return cos_; }
  [[nodiscard]] double sin() const { return sin_; }
  [[nodiscard]] HalfPlane half() const { return theta_ < kPi ? HalfPlane::Upper : HalfPlane::Lower; }
  [[nodiscard]] Direction opposite() const { return Direction(theta_ + kPi); }

 private:
  double theta_;
  double cos_;
  double sin_;
};

/// Reduce an angle to [0, 2pi).
double canonical_angle(double theta);

/// Piecewise square-root factors whose product defines s_branch.
Complex branch_factor_lower(double s);  // sqrt|s| for s > 0, -i sqrt|s| otherwise
Complex branch_factor_upper(double s);  // sqrt|s| for s > 0,  i sqrt|s| otherwise

/// S(t, a): -i sqrt(a^2 - t^2) for |t| <= a, sqrt(t^2 - a^2) otherwise.
Complex s_branch(double t, double a);

/// Planar reflection coefficient R(theta) for index ratio n.
Complex reflection_coeff(double theta, double n);
/// T(theta) = R(theta) + 1.
Complex transmission_coeff(double theta, double n);
/// R0(theta) = R(theta + pi), the coefficient seen by an incidence angle.
Complex reflection_coeff_incident(double theta_d, double n);

/// Reference wave u0(., d) for a fixed downward incidence. Caches the
/// direction-dependent coefficients so that grid-wide evaluation is cheap.
class ReferenceWave {
 public:
  ReferenceWave(const Direction& d, const MediumPair& media);

  /// Upper-branch formula is used on x2 = 0 (both branches agree there).
  [[nodiscard]] Complex value(const Point& x) const;
  [[nodiscard]] ComplexGradient gradient(const Point& x) const;

  [[nodiscard]] Complex upper_value(const Point& x) const;
  [[nodiscard]] Complex lower_value(const Point& x) const;
  [[nodiscard]] ComplexGradient upper_gradient(const Point& x) const;
  [[nodiscard]] ComplexGradient lower_gradient(const Point& x) const;

  /// Incident plane wave e^{i k+ x.d} alone.
  [[nodiscard]] Complex incident(const Point& x) const;

  [[nodiscard]] Complex reflection() const { return reflection_; }
  [[nodiscard]] Complex transmission() const { return transmission_; }
  [[nodiscard]] const Direction& direction() const { return d_; }

 private:
  Direction d_;
  double k_plus_;
  Complex reflection_;
  Complex transmission_;
  Complex branch_;  // S(cos theta_d, n)
};

Complex reference_field(const Point& x, const Direction& d, const MediumPair& media);
ComplexGradient reference_gradient(const Point& x, const Direction& d, const MediumPair& media);

/// Far-field kernel G_inf(xhat, y) for an upward observation direction,
/// together with its gradient in y.
class FarFieldKernel {
 public:
  FarFieldKernel(const Direction& xhat, const MediumPair& media);

  [[nodiscard]] Complex value(const Point& y) const;
  [[nodiscard]] ComplexGradient gradient(const Point& y) const;
  /// Derivative along the unit vector `normal` at y.
  [[nodiscard]] Complex normal_derivative(const Point& y, const Point& normal) const;

  [[nodiscard]] Complex upper_value(const Point& y) const;
  [[nodiscard]] Complex lower_value(const Point& y) const;

 private:
  Direction xhat_;
  double k_plus_;
  Complex prefactor_;
  Complex reflection_;
  Complex transmission_;
  Complex branch_;
};

Complex farfield_kernel(const Direction& xhat, const Point& y, const MediumPair& media);
Complex farfield_kernel_normal(const Direction& xhat, const Point& y, const Point& normal,
                               const MediumPair& media);

}  // namespace layerscope
