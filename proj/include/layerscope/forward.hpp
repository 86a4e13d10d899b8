#pragma once

// Frequency-domain finite-difference Helmholtz solver for the scattered field
// of a locally rough two-layered medium. The unbounded exterior is truncated
// with complex coordinate stretching (PML) on all four sides. The scattered
// field solves
//
//   (Laplace + k(x)^2) u_s = -(k(x)^2 - k_ref(x)^2) u0(x, d)
//
// where k follows the rough interface and k_ref the planar one, so the source
// lives only in the lens between the two interfaces.

#include <Eigen/Sparse>

#include <memory>
#include <span>
#include <vector>

#include "layerscope/layered_core.hpp"
#include "layerscope/surfaces.hpp"

namespace layerscope {

struct Box {
  double x1_min = 0.0;
  double x1_max = 0.0;
  double x2_min = 0.0;
  double x2_max = 0.0;
};

enum class LinearSolverKind { Direct, Iterative };

/// How the piecewise-constant k(x)^2 is sampled at grid nodes.
enum class CoefficientSampling {
  Pointwise,    // k^2 of the side the node lies on
  CellAverage,  // area-weighted mean of k^2 over the node's cell
};

struct SolverConfig {
  Box box;                      // physical (non-PML) region
  int points_per_wavelength = 12;
  double pml_thickness = 0.0;   // <= 0 selects half the longer wavelength
  double pml_strength = 6.0;    // round-trip attenuation target in log10 decades
  LinearSolverKind linear_solver = LinearSolverKind::Direct;
  double iterative_tolerance = 1e-8;
  CoefficientSampling sampling = CoefficientSampling::CellAverage;
};

/// Box = disk of radius `radius` plus one longer wavelength of margin.
SolverConfig default_solver_config(const MediumPair& media, double radius);

/// Throws std::invalid_argument naming the offending field (e.g.
/// "solver.box") when the configuration cannot host the given circle or the
/// perturbation.
void check_solver_config(const SolverConfig& config, const MediumPair& media,
                         const SurfaceProfile& profile, double radius);

/// Complex samples on the physical part of a uniform grid. Node (i, j) sits at
/// (origin.x1 + i h, origin.x2 + j h); storage is row-major in j.
class FieldGrid {
 public:
  FieldGrid(Point origin, double spacing, int n1, int n2, std::vector<Complex> values,
            MediumPair media, SurfaceProfile profile);

  [[nodiscard]] Point origin() const { return origin_; }
  [[nodiscard]] double spacing() const { return spacing_; }
  [[nodiscard]] int n1() const { return n1_; }
  [[nodiscard]] int n2() const { return n2_; }
  [[nodiscard]] Point node(int i, int j) const {
    return {origin_.x1 + i * spacing_, origin_.x2 + j * spacing_};
  }
  [[nodiscard]] Complex at(int i, int j) const { return values_[index(i, j)]; }
  [[nodiscard]] std::span<const Complex> values() const { return values_; }
  [[nodiscard]] const MediumPair& media() const { return media_; }
  [[nodiscard]] const SurfaceProfile& profile() const { return profile_; }

  /// Tensor-product cubic Lagrange interpolation. Throws std::out_of_range
  /// when the 4x4 stencil leaves the grid.
  [[nodiscard]] Complex interpolate(const Point& p) const;
  [[nodiscard]] double max_abs() const;

 private:
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n1_) + static_cast<std::size_t>(i);
  }

  Point origin_;
  double spacing_;
  int n1_;
  int n2_;
  std::vector<Complex> values_;
  MediumPair media_;
  SurfaceProfile profile_;
};

/// Index layout of the full (physical + PML) grid.
struct GridLayout {
  double spacing = 0.0;
  int phys_i_begin = 0;  // node x1 = i * spacing
  int phys_j_begin = 0;
  int phys_n1 = 0;
  int phys_n2 = 0;
  int pml_nodes = 0;     // PML nodes on each side, Dirichlet wall beyond
  double pml_sigma0 = 0.0;
  double pml_wavenumber = 0.0;

  [[nodiscard]] int total_n1() const { return phys_n1 + 2 * pml_nodes; }
  [[nodiscard]] int total_n2() const { return phys_n2 + 2 * pml_nodes; }
  [[nodiscard]] std::size_t unknowns() const {
    return static_cast<std::size_t>(total_n1()) * static_cast<std::size_t>(total_n2());
  }
  /// Coordinates of total-grid node (I, J).
  [[nodiscard]] double x1(int I) const { return (phys_i_begin - pml_nodes + I) * spacing; }
  [[nodiscard]] double x2(int J) const { return (phys_j_begin - pml_nodes + J) * spacing; }
};

GridLayout make_layout(const SolverConfig& config, const MediumPair& media);

/// Assembles and factors the PML-truncated operator once; every incidence is
/// then a single back-substitution. solve() is const and may be called
/// concurrently.
class HelmholtzSolver {
 public:
  HelmholtzSolver(SurfaceProfile profile, MediumPair media, SolverConfig config);
  ~HelmholtzSolver();
  HelmholtzSolver(HelmholtzSolver&&) noexcept;
  HelmholtzSolver& operator=(HelmholtzSolver&&) noexcept;
  HelmholtzSolver(const HelmholtzSolver&) = delete;
  HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

  [[nodiscard]] FieldGrid solve(const Direction& d) const;

  /// Right-hand side -(k^2 - k_ref^2) u0 on the physical grid (row-major).
  [[nodiscard]] std::vector<Complex> source(const Direction& d) const;
  /// Sampled k^2 (rough interface) and k_ref^2 (planar interface) per
  /// physical node.
  [[nodiscard]] const std::vector<double>& wavenumber_sq() const { return k_sq_; }
  [[nodiscard]] const std::vector<double>& reference_wavenumber_sq() const { return k_ref_sq_; }

  /// max |discrete Helmholtz residual of u0| / (max k^2 max |u0|) over the
  /// interior physical nodes: the consistency floor of the discretisation.
  [[nodiscard]] double reference_residual(const Direction& d) const;

  [[nodiscard]] const GridLayout& layout() const { return layout_; }
  [[nodiscard]] const SurfaceProfile& profile() const { return profile_; }
  [[nodiscard]] const MediumPair& media() const { return media_; }
  [[nodiscard]] const SolverConfig& config() const { return config_; }

 private:
  struct Factorization;

  void sample_coefficients();
  void assemble_and_factor();

  SurfaceProfile profile_;
  MediumPair media_;
  SolverConfig config_;
  GridLayout layout_;
  std::vector<double> k_sq_;
  std::vector<double> k_ref_sq_;
  std::unique_ptr<Factorization> factorization_;
};

FieldGrid solve_scattered(const SurfaceProfile& profile, const MediumPair& media,
                          const Direction& d, const SolverConfig& config);

/// Values and outward radial derivatives on a circle of radius R.
struct CircleTrace {
  double radius = 0.0;
  bool upper_half = false;
  std::vector<double> angles;
  std::vector<Point> points;
  std::vector<Complex> values;
  std::vector<Complex> normal_derivatives;
};

/// Midpoint angles: 2 pi (p - 1/2) / M on the full circle, pi (p - 1/2) / M
/// on the upper half.
std::vector<double> circle_angles(int count, bool upper_half);

CircleTrace trace_on_circle(const FieldGrid& field, double radius, int count, bool upper_half);

/// |u0 + u_s| at each trace point.
std::vector<double> phaseless_total(const CircleTrace& trace, const Direction& d,
                                    const MediumPair& media);

/// Far-field pattern from a full-circle trace by the midpoint rule applied
/// separately on the upper and lower half circles.
std::vector<Complex> far_field(const CircleTrace& trace, const MediumPair& media,
                               std::span<const Direction> observations);

}  // namespace layerscope
