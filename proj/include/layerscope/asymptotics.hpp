#pragma once

// Brute-force quadrature checks of the oscillatory-integral estimates and
// far-field expansions that underpin the imaging functions.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "layerscope/layered_core.hpp"

namespace layerscope {

using RealFunction = std::function<double(double)>;
using ComplexFunction = std::function<Complex(double)>;

struct QuadratureOptions {
  double relative_tolerance = 1e-10;
  std::size_t max_panels = 1u << 22;
};

/// Integral of e^{i lambda phase(t)} amplitude(t) over [a, b] by composite
/// Gauss-Legendre. Panels never span more than a quarter oscillation and are
/// bisected until the two-level estimate agrees to the tolerance.
/// `breakpoints` inside (a, b) are forced panel edges (e.g. branch points).
/// Throws std::runtime_error if the panel budget is exhausted.
Complex oscillatory_quadrature(const RealFunction& phase, const ComplexFunction& amplitude, double a,
                               double b, double lambda, std::span<const double> breakpoints = {},
                               const QuadratureOptions& options = {});

struct FresnelReport {
  double a = 0.0;
  double b = 0.0;
  double lambda = 0.0;
  Complex numeric;
  Complex leading;
  double residual = 0.0;  // |numeric - leading|
  double bound = 0.0;     // 2 / lambda (1/|a| + 1/b)
  bool holds = false;
};

/// Integral of e^{-i lambda eta^2 / 2} over [a, b] against its stationary-phase
/// value e^{-i pi/4} sqrt(2 pi / lambda).
FresnelReport fresnel_check(double a, double b, double lambda);

struct VanDerCorputReport {
  double lambda = 0.0;
  double numeric = 0.0;    // |integral|
  double bound = 0.0;      // (2N + 2) / lambda (|phi(b)| + total variation of phi)
  double variation = 0.0;  // integral of |phi'|
  int pieces = 0;
  bool holds = false;
};

/// First-derivative oscillatory bound for a phase with |u'| >= 1 whose u' is
/// monotone on `pieces` subintervals. The precondition is verified by
/// sampling; violations throw std::invalid_argument.
VanDerCorputReport vdc_bound_check(const RealFunction& phase, const ComplexFunction& amplitude,
                                   double a, double b, int pieces, double lambda);

struct RemainderScalingReport {
  std::vector<double> lambdas;
  std::vector<Complex> integrals;
  std::vector<double> scaled;  // |I(lambda)| * lambda
  double band_ratio = 0.0;     // max / min of scaled (0 when all vanish)
  bool holds = false;          // band_ratio <= 4
};

/// I(lambda) = integral over [a, b] of e^{-i lambda eta^2/2} (f(eta) - f(0)) with
/// f = q e^{i t p}; checks that |I| lambda stays in a factor-4 band.
RemainderScalingReport remainder_scaling_check(const RealFunction& p, const ComplexFunction& q,
                                               double t, double a, double b,
                                               std::span<const double> lambdas);

struct ExpansionReport {
  Point x;
  Point z;
  Complex quadrature;
  Complex leading;
  double error = 0.0;
};

/// Angular exclusion used by the expansion checks (radians).
inline constexpr double kExpansionMargin = kPi / 8.0;

/// -integral over the lower unit semicircle of e^{i k+ (x' - z') . d} versus
/// its leading far-field term.
ExpansionReport mirror_wave_expansion_check(const Point& x, const Point& z, const MediumPair& media);

/// integral over the lower unit semicircle of R0(theta_d) e^{i k+ (x' - z) . d}
/// versus its leading term, which carries R(theta_xhat).
ExpansionReport reflected_wave_expansion_check(const Point& x, const Point& z,
                                               const MediumPair& media);

enum class ExpansionKind { MirrorWave, ReflectedWave };

struct ExpansionSweep {
  std::vector<double> scaled_radii;      // k+ |x|
  std::vector<double> mean_errors;       // averaged over the angle grid
  std::vector<double> mean_magnitudes;   // mean |quadrature|
  std::vector<double> ratios;            // mean_errors[i+1] / mean_errors[i]
  double magnitude_slope = 0.0;          // log-log slope of mean |quadrature| vs |x|
  std::vector<double> angles;
};

/// Observation angles in [pi/8, 7pi/8] at least kExpansionMargin away from
/// the critical angles (when k+ > k-).
std::vector<double> expansion_angles(const MediumPair& media, int count);

ExpansionSweep expansion_sweep(ExpansionKind kind, const MediumPair& media, const Point& z,
                               std::span<const double> scaled_radii, int angle_count);

}  // namespace layerscope
