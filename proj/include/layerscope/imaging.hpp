#pragma once

// Direct imaging functions for the rough interface: the phaseless
// total-field indicator, the phased far-field indicator, the full-phase
// diagnostic they both approximate, and the measurement noise model.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "layerscope/layered_core.hpp"
#include "layerscope/surfaces.hpp"

namespace layerscope {

enum class MeasurementKind { PhaselessTotal, ComplexTotal, FarField };

std::string to_string(MeasurementKind kind);

/// Receiver / observation angles pi (p - 1/2) / M, p = 1..M.
std::vector<double> receiver_angles(int count);
/// Incidence angles pi + pi (q - 1/2) / N, q = 1..N.
std::vector<double> incidence_angles(int count);

/// Rows are receivers, columns incidences. Phaseless data live in
/// `magnitudes`; complex kinds in `values`.
struct MeasurementSet {
  MeasurementKind kind;
  MediumPair media;
  std::optional<double> radius;  // absent for far-field data
  std::vector<double> receiver_angles;
  std::vector<double> incidence_angles;
  Eigen::MatrixXd magnitudes;
  Eigen::MatrixXcd values;

  [[nodiscard]] int receivers() const { return static_cast<int>(receiver_angles.size()); }
  [[nodiscard]] int incidences() const { return static_cast<int>(incidence_angles.size()); }
  /// Receiver location R (cos theta_p, sin theta_p); requires a radius.
  [[nodiscard]] Point receiver(int p) const;

  /// Midpoint angle grids are attached automatically.
  static MeasurementSet phaseless(Eigen::MatrixXd data, double radius, MediumPair media);
  static MeasurementSet complex_total(Eigen::MatrixXcd data, double radius, MediumPair media);
  static MeasurementSet far_field(Eigen::MatrixXcd data, MediumPair media);

  /// Throws std::invalid_argument when shapes or angle ranges are violated.
  /// Phaseless entries may be negative after noise is added.
  void validate() const;
};

/// Rectangular region K sampled at nx x ny points including the edges.
struct SamplingGrid {
  double x1_min = -1.0;
  double x1_max = 1.0;
  double x2_min = -0.6;
  double x2_max = 0.6;
  int nx = 2;
  int ny = 2;

  [[nodiscard]] Point at(int i, int j) const;
  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
};

/// K = [-1.25 s, 1.25 s] x [-0.75 s, 0.75 s] (s = support half-width, 0.8
/// for the flat profile) at a spacing of one tenth of the upper wavelength.
SamplingGrid default_sampling_grid(const MediumPair& media, const SurfaceProfile& profile);

/// Values stored row-major: index j * nx + i, row j at constant z2.
struct ImageMap {
  SamplingGrid grid;
  std::vector<double> values;
  std::string source;

  [[nodiscard]] double at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.nx) +
                  static_cast<std::size_t>(i)];
  }
};

/// Per-column relative perturbation of exactly `delta` in the l2 norm. The
/// noise for column q comes from PCG stream q under `seed`.
MeasurementSet add_noise(const MeasurementSet& meas, double delta, std::uint64_t seed);

/// 1 + |R0|^2 + conj(R0) e^{2 i k+ x2 d2}: the planar-interface part of |u0|^2.
Complex background_a1(const Point& x, double theta_d, const MediumPair& media);
/// exp(i k+ (x' - z') . d).
Complex translation_a2(const Point& x, double theta_d, const Point& z, const MediumPair& media);
/// sqrt(2 pi / k+) e^{-i pi/4} [R(theta) e^{-i k+ xhat.z'} - e^{-i k+ xhat.z}].
Complex af_term(const Direction& xhat, const Point& z, const MediumPair& media);

ImageMap image_phaseless(const MeasurementSet& meas, const SamplingGrid& grid, unsigned threads = 1);
ImageMap image_farfield(const MeasurementSet& meas, const SamplingGrid& grid, unsigned threads = 1);
ImageMap i_s_diagnostic(const MeasurementSet& meas, const SamplingGrid& grid, unsigned threads = 1);

namespace detail {
/// The phaseless indicator evaluated from |u_tot|^2 supplied directly (may be
/// complex for synthetic checks). Angles, radius and media come from `layout`.
ImageMap image_phaseless_intensity(const Eigen::MatrixXcd& intensity, const MeasurementSet& layout,
                                   const SamplingGrid& grid, unsigned threads);
}  // namespace detail

}  // namespace layerscope
