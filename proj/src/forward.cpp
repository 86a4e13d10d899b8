#include "layerscope/forward.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace layerscope {

namespace {

double longer_wavelength(const MediumPair& media) {
  return kTwoPi / std::min(media.k_plus(), media.k_minus());
}

double shorter_wavelength(const MediumPair& media) {
  return kTwoPi / std::max(media.k_plus(), media.k_minus());
}

// 8-point Gauss-Legendre on [-1/2, 1/2].
constexpr std::array<double, 8> kCellNodes = {
    -0.4801449282487681, -0.3983332387068134, -0.2627662049581645, -0.0916717277686760,
    0.0916717277686760,  0.2627662049581645,  0.3983332387068134,  0.4801449282487681};
constexpr std::array<double, 8> kCellWeights = {
    0.0506142681451881, 0.1111905172266872, 0.1568533229389436, 0.1813418916891810,
    0.1813418916891810, 0.1568533229389436, 0.1111905172266872, 0.0506142681451881};

std::array<double, 4> cubic_weights(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

}  // namespace

// ---------------------------------------------------------------------------

SolverConfig default_solver_config(const MediumPair& media, double radius) {
  SolverConfig config;
  const double extent = radius + longer_wavelength(media);
  config.box = {-extent, extent, -extent, extent};
  return config;
}

void check_solver_config(const SolverConfig& config, const MediumPair& media,
                         const SurfaceProfile& profile, double radius) {
  const Box& b = config.box;
  if (!(b.x1_min < b.x1_max) || !(b.x2_min < b.x2_max)) {
    throw std::invalid_argument("solver.box: empty or inverted extents");
  }
  if (config.points_per_wavelength < 10) {
    throw std::invalid_argument("solver.points_per_wavelength: must be at least 10");
  }
  if (!(config.pml_strength > 0.0)) {
    throw std::invalid_argument("solver.pml_strength: must be positive");
  }
  if (!(config.iterative_tolerance > 0.0)) {
    throw std::invalid_argument("solver.iterative_tolerance: must be positive");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("measurement.R: must be positive");
  const double margin = longer_wavelength(media);
  const double need = radius + margin;
  // A tiny slack absorbs rounding in boxes derived from the same numbers.
  const double slack = 1e-12 * need;
  if (b.x1_min > -need + slack || b.x1_max < need - slack || b.x2_min > -need + slack ||
      b.x2_max < need - slack) {
    throw std::invalid_argument("solver.box: must contain the disk of radius " +
                                std::to_string(radius) + " plus one wavelength (" +
                                std::to_string(margin) + ")");
  }
  const double s = profile.support_halfwidth();
  const double a = profile.amplitude_bound();
  if (b.x1_min > -s || b.x1_max < s || b.x2_min > -a || b.x2_max < a) {
    throw std::invalid_argument("solver.box: must contain the perturbation support");
  }
  const double s_max = profile.amplitude_bound();
  if (radius <= std::max(s, s_max)) {
    throw std::invalid_argument("measurement.R: circle must enclose the perturbation");
  }
}

// ---------------------------------------------------------------------------

FieldGrid::FieldGrid(Point origin, double spacing, int n1, int n2, std::vector<Complex> values,
                     MediumPair media, SurfaceProfile profile)
    : origin_(origin),
      spacing_(spacing),
      n1_(n1),
      n2_(n2),
      values_(std::move(values)),
      media_(media),
      profile_(std::move(profile)) {
  if (n1 < 4 || n2 < 4 || !(spacing > 0.0)) {
    throw std::invalid_argument("FieldGrid: need at least 4x4 nodes and positive spacing");
  }
  if (values_.size() != static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2)) {
    throw std::invalid_argument("FieldGrid: value count does not match dimensions");
  }
}

Complex FieldGrid::interpolate(const Point& p) const {
  const double fx = (p.x1 - origin_.x1) / spacing_;
  const double fy = (p.x2 - origin_.x2) / spacing_;
  const int i0 = static_cast<int>(std::floor(fx));
  const int j0 = static_cast<int>(std::floor(fy));
  if (i0 - 1 < 0 || i0 + 2 >= n1_ || j0 - 1 < 0 || j0 + 2 >= n2_) {
    throw std::out_of_range("FieldGrid::interpolate: point outside the physical region");
  }
  const auto wx = cubic_weights(fx - i0);
  const auto wy = cubic_weights(fy - j0);
  Complex acc{0.0, 0.0};
  for (int b = 0; b < 4; ++b) {
    Complex row{0.0, 0.0};
    for (int a = 0; a < 4; ++a) row += wx[a] * at(i0 - 1 + a, j0 - 1 + b);
    acc += wy[b] * row;
  }
  return acc;
}

double FieldGrid::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

GridLayout make_layout(const SolverConfig& config, const MediumPair& media) {
  GridLayout g;
  g.spacing = shorter_wavelength(media) / config.points_per_wavelength;
  const double h = g.spacing;
  g.phys_i_begin = static_cast<int>(std::floor(config.box.x1_min / h));
  g.phys_j_begin = static_cast<int>(std::floor(config.box.x2_min / h));
  g.phys_n1 = static_cast<int>(std::ceil(config.box.x1_max / h)) - g.phys_i_begin + 1;
  g.phys_n2 = static_cast<int>(std::ceil(config.box.x2_max / h)) - g.phys_j_begin + 1;
  const double thickness =
      config.pml_thickness > 0.0 ? config.pml_thickness : 0.5 * longer_wavelength(media);
  g.pml_nodes = std::max(4, static_cast<int>(std::ceil(thickness / h)));
  const double wall = (g.pml_nodes + 1) * h;
  // One-way decay exp(-(k/k_pml) sigma0 wall / 3) per pass, doubled for the
  // round trip, meets 10^-strength for every k >= k_pml.
  g.pml_sigma0 = 3.0 * config.pml_strength * std::log(10.0) / (2.0 * wall);
  g.pml_wavenumber = std::min(media.k_plus(), media.k_minus());
  return g;
}

struct HelmholtzSolver::Factorization {
  using Matrix = Eigen::SparseMatrix<Complex>;
  Matrix matrix;
  std::unique_ptr<Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>>> direct;
  std::unique_ptr<Eigen::BiCGSTAB<Matrix, Eigen::IncompleteLUT<Complex>>> iterative;
};

HelmholtzSolver::HelmholtzSolver(SurfaceProfile profile, MediumPair media, SolverConfig config)
    : profile_(std::move(profile)),
      media_(media),
      config_(config),
      layout_(make_layout(config, media)) {
  sample_coefficients();
  assemble_and_factor();
}

HelmholtzSolver::~HelmholtzSolver() = default;
HelmholtzSolver::HelmholtzSolver(HelmholtzSolver&&) noexcept = default;
HelmholtzSolver& HelmholtzSolver::operator=(HelmholtzSolver&&) noexcept = default;

void HelmholtzSolver::sample_coefficients() {
  const GridLayout& g = layout_;
  const double h = g.spacing;
  const double kp2 = media_.k_plus() * media_.k_plus();
  const double km2 = media_.k_minus() * media_.k_minus();
  const std::size_t count = static_cast<std::size_t>(g.phys_n1) * g.phys_n2;
  k_sq_.assign(count, 0.0);
  k_ref_sq_.assign(count, 0.0);

  std::vector<double> heights(kCellNodes.size());
  for (int i = 0; i < g.phys_n1; ++i) {
    const double x1 = (g.phys_i_begin + i) * h;
    const double center_height = profile_.height(x1);
    for (std::size_t q = 0; q < kCellNodes.size(); ++q) {
      heights[q] = profile_.height(x1 + kCellNodes[q] * h);
    }
    for (int j = 0; j < g.phys_n2; ++j) {
      const double x2 = (g.phys_j_begin + j) * h;
      const std::size_t idx = static_cast<std::size_t>(j) * g.phys_n1 + i;
      if (config_.sampling == CoefficientSampling::Pointwise) {
        k_sq_[idx] = x2 - center_height > 0.0 ? kp2 : km2;
        k_ref_sq_[idx] = x2 > 0.0 ? kp2 : km2;
        continue;
      }
      // Fraction of the cell [x2 - h/2, x2 + h/2] lying below each curve.
      const double bottom = x2 - 0.5 * h;
      // Accumulating the difference keeps the contrast exactly zero where h vanishes.
      const double below_ref = std::clamp(-bottom / h, 0.0, 1.0);
      double excess = 0.0;
      for (std::size_t q = 0; q < kCellNodes.size(); ++q) {
        excess += kCellWeights[q] * (std::clamp((heights[q] - bottom) / h, 0.0, 1.0) - below_ref);
      }
      k_ref_sq_[idx] = below_ref * km2 + (1.0 - below_ref) * kp2;
      k_sq_[idx] = k_ref_sq_[idx] + excess * (km2 - kp2);
    }
  }
}

void HelmholtzSolver::assemble_and_factor() {
  const GridLayout& g = layout_;
  const double h = g.spacing;
  const int t1 = g.total_n1();
  const int t2 = g.total_n2();
  const double phys_x1_lo = g.phys_i_begin * h;
  const double phys_x1_hi = (g.phys_i_begin + g.phys_n1 - 1) * h;
  const double phys_x2_lo = g.phys_j_begin * h;
  const double phys_x2_hi = (g.phys_j_begin + g.phys_n2 - 1) * h;
  const double wall = (g.pml_nodes + 1) * h;

  auto stretch = [&](double x, double lo, double hi) {
    double depth = 0.0;
    if (x < lo) depth = lo - x;
    if (x > hi) depth = x - hi;
    const double r = depth / wall;
    return Complex(1.0, g.pml_sigma0 * r * r / g.pml_wavenumber);
  };
  auto sx = [&](double x) { return stretch(x, phys_x1_lo, phys_x1_hi); };
  auto sy = [&](double x) { return stretch(x, phys_x2_lo, phys_x2_hi); };

  const double kp2 = media_.k_plus() * media_.k_plus();
  const double km2 = media_.k_minus() * media_.k_minus();
  const double inv_h2 = 1.0 / (h * h);

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(5 * g.unknowns());
  for (int J = 0; J < t2; ++J) {
    const double y = g.x2(J);
    const Complex sy0 = sy(y);
    const Complex sy_up = sy(y + 0.5 * h);
    const Complex sy_dn = sy(y - 0.5 * h);
    const int j = J - g.pml_nodes;
    for (int I = 0; I < t1; ++I) {
      const double x = g.x1(I);
      const Complex sx0 = sx(x);
      const Complex sx_rt = sx(x + 0.5 * h);
      const Complex sx_lt = sx(x - 0.5 * h);
      const int i = I - g.pml_nodes;
      double k2;
      if (i >= 0 && i < g.phys_n1 && j >= 0 && j < g.phys_n2) {
        k2 = k_sq_[static_cast<std::size_t>(j) * g.phys_n1 + i];
      } else {
        // The interface is planar outside the physical box.
        k2 = y > 0.0 ? kp2 : (y < 0.0 ? km2 : 0.5 * (kp2 + km2));
        if (config_.sampling == CoefficientSampling::Pointwise) k2 = y > 0.0 ? kp2 : km2;
      }
      const int row = J * t1 + I;
      const Complex c_rt = sy0 / sx_rt * inv_h2;
      const Complex c_lt = sy0 / sx_lt * inv_h2;
      const Complex c_up = sx0 / sy_up * inv_h2;
      const Complex c_dn = sx0 / sy_dn * inv_h2;
      triplets.emplace_back(row, row, -(c_rt + c_lt + c_up + c_dn) + sx0 * sy0 * k2);
      if (I + 1 < t1) triplets.emplace_back(row, row + 1, c_rt);
      if (I > 0) triplets.emplace_back(row, row - 1, c_lt);
      if (J + 1 < t2) triplets.emplace_back(row, row + t1, c_up);
      if (J > 0) triplets.emplace_back(row, row - t1, c_dn);
    }
  }

  factorization_ = std::make_unique<Factorization>();
  auto& f = *factorization_;
  const auto n = static_cast<Eigen::Index>(g.unknowns());
  f.matrix.resize(n, n);
  f.matrix.setFromTriplets(triplets.begin(), triplets.end());
  f.matrix.makeCompressed();

  if (config_.linear_solver == LinearSolverKind::Direct) {
    f.direct = std::make_unique<Eigen::SparseLU<Factorization::Matrix, Eigen::COLAMDOrdering<int>>>();
    f.direct->analyzePattern(f.matrix);
    f.direct->factorize(f.matrix);
    if (f.direct->info() != Eigen::Success) {
      throw std::runtime_error("HelmholtzSolver: LU factorisation failed: " +
                               f.direct->lastErrorMessage());
    }
  } else {
    f.iterative = std::make_unique<Eigen::BiCGSTAB<Factorization::Matrix, Eigen::IncompleteLUT<Complex>>>();
    f.iterative->preconditioner().setDroptol(1e-4);
    f.iterative->preconditioner().setFillfactor(20);
    f.iterative->setTolerance(config_.iterative_tolerance);
    f.iterative->setMaxIterations(20000);
    f.iterative->compute(f.matrix);
    if (f.iterative->info() != Eigen::Success) {
      throw std::runtime_error("HelmholtzSolver: preconditioner setup failed");
    }
  }
}

std::vector<Complex> HelmholtzSolver::source(const Direction& d) const {
  const GridLayout& g = layout_;
  const ReferenceWave u0(d, media_);
  std::vector<Complex> rhs(static_cast<std::size_t>(g.phys_n1) * g.phys_n2, Complex{});
  for (int j = 0; j < g.phys_n2; ++j) {
    for (int i = 0; i < g.phys_n1; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.phys_n1 + i;
      const double contrast = k_sq_[idx] - k_ref_sq_[idx];
      if (contrast == 0.0) continue;
      const Point x{(g.phys_i_begin + i) * g.spacing, (g.phys_j_begin + j) * g.spacing};
      rhs[idx] = -contrast * u0.value(x);
    }
  }
  return rhs;
}

FieldGrid HelmholtzSolver::solve(const Direction& d) const {
  const GridLayout& g = layout_;
  const std::vector<Complex> phys_rhs = source(d);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g.unknowns()));
  const int t1 = g.total_n1();
  // The source vanishes inside the PML, where the stretch factors differ from 1.
  for (int j = 0; j < g.phys_n2; ++j) {
    for (int i = 0; i < g.phys_n1; ++i) {
      const Complex v = phys_rhs[static_cast<std::size_t>(j) * g.phys_n1 + i];
      if (v != Complex{}) rhs[(j + g.pml_nodes) * t1 + (i + g.pml_nodes)] = v;
    }
  }

  Eigen::VectorXcd sol;
  const auto& f = *factorization_;
  if (f.direct) {
    sol = f.direct->solve(rhs);
    if (f.direct->info() != Eigen::Success) {
      throw std::runtime_error("HelmholtzSolver: back-substitution failed");
    }
  } else {
    sol = f.iterative->solve(rhs);
    if (f.iterative->info() != Eigen::Success) {
      throw std::runtime_error("HelmholtzSolver: BiCGSTAB did not converge (error " +
                               std::to_string(f.iterative->error()) + ")");
    }
  }

  std::vector<Complex> values(static_cast<std::size_t>(g.phys_n1) * g.phys_n2);
  for (int j = 0; j < g.phys_n2; ++j) {
    for (int i = 0; i < g.phys_n1; ++i) {
      const Complex v = sol[(j + g.pml_nodes) * t1 + (i + g.pml_nodes)];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::runtime_error("HelmholtzSolver: non-finite scattered field");
      }
      values[static_cast<std::size_t>(j) * g.phys_n1 + i] = v;
    }
  }
  return FieldGrid({g.phys_i_begin * g.spacing, g.phys_j_begin * g.spacing}, g.spacing, g.phys_n1,
                   g.phys_n2, std::move(values), media_, profile_);
}

double HelmholtzSolver::reference_residual(const Direction& d) const {
  const GridLayout& g = layout_;
  const ReferenceWave u0(d, media_);
  const double h = g.spacing;
  const double kmax2 = std::max(media_.k_plus(), media_.k_minus()) *
                       std::max(media_.k_plus(), media_.k_minus());
  auto value = [&](int i, int j) {
    return u0.value({(g.phys_i_begin + i) * h, (g.phys_j_begin + j) * h});
  };
  double worst = 0.0;
  double scale = 0.0;
  for (int j = 1; j + 1 < g.phys_n2; ++j) {
    for (int i = 1; i + 1 < g.phys_n1; ++i) {
      const Complex c = value(i, j);
      const Complex lap =
          (value(i + 1, j) + value(i - 1, j) + value(i, j + 1) + value(i, j - 1) - 4.0 * c) /
          (h * h);
      const double k2 = k_ref_sq_[static_cast<std::size_t>(j) * g.phys_n1 + i];
      worst = std::max(worst, std::abs(lap + k2 * c));
      scale = std::max(scale, std::abs(c));
    }
  }
  return worst / (kmax2 * scale);
}

FieldGrid solve_scattered(const SurfaceProfile& profile, const MediumPair& media,
                          const Direction& d, const SolverConfig& config) {
  if (d.half() != HalfPlane::Lower) {
    throw std::domain_error("solve_scattered: incidence direction must point downward");
  }
  return HelmholtzSolver(profile, media, config).solve(d);
}

// ---------------------------------------------------------------------------

std::vector<double> circle_angles(int count, bool upper_half) {
  if (count < 1) throw std::invalid_argument("circle_angles: count must be positive");
  const double span = upper_half ? kPi : kTwoPi;
  std::vector<double> angles(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p) angles[static_cast<std::size_t>(p)] = span * (p + 0.5) / count;
  return angles;
}

CircleTrace trace_on_circle(const FieldGrid& field, double radius, int count, bool upper_half) {
  if (!(radius > 0.0)) throw std::invalid_argument("trace_on_circle: radius must be positive");
  CircleTrace trace;
  trace.radius = radius;
  trace.upper_half = upper_half;
  trace.angles = circle_angles(count, upper_half);
  const double h = field.spacing();
  for (const double theta : trace.angles) {
    const Point e{std::cos(theta), std::sin(theta)};
    auto at_radius = [&](double r) { return field.interpolate({r * e.x1, r * e.x2}); };
    std::array<Complex, 5> f;
    try {
      for (int k = 0; k < 5; ++k) f[static_cast<std::size_t>(k)] = at_radius(radius - k * h);
      // The outer stencil row must also fit, one node beyond the circle.
      (void)at_radius(radius + h);
    } catch (const std::out_of_range&) {
      throw std::out_of_range("trace_on_circle: circle of radius " + std::to_string(radius) +
                              " exits the physical region");
    }
    trace.points.push_back({radius * e.x1, radius * e.x2});
    trace.values.push_back(f[0]);
    // Fourth-order one-sided difference pointing inward.
    trace.normal_derivatives.push_back(
        (25.0 * f[0] - 48.0 * f[1] + 36.0 * f[2] - 16.0 * f[3] + 3.0 * f[4]) / (12.0 * h));
  }
  return trace;
}

std::vector<double> phaseless_total(const CircleTrace& trace, const Direction& d,
                                    const MediumPair& media) {
  const ReferenceWave u0(d, media);
  std::vector<double> out(trace.values.size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = std::abs(u0.value(trace.points[p]) + trace.values[p]);
  }
  return out;
}

std::vector<Complex> far_field(const CircleTrace& trace, const MediumPair& media,
                               std::span<const Direction> observations) {
  if (trace.upper_half) throw std::invalid_argument("far_field: needs a full-circle trace");
  const std::size_t m = trace.values.size();
  if (trace.points.size() != m || trace.normal_derivatives.size() != m || trace.angles.size() != m) {
    throw std::invalid_argument("far_field: mismatched trace lengths");
  }
  if (m == 0 || m % 2 != 0) {
    throw std::invalid_argument("far_field: node count must be even so 0 and pi are panel edges");
  }
  const double weight = kTwoPi * trace.radius / static_cast<double>(m);
  std::vector<Complex> out;
  out.reserve(observations.size());
  for (const Direction& xhat : observations) {
    const FarFieldKernel kernel(xhat, media);
    // Upper and lower half circles summed separately; u_s is only C^1 across x2 = 0.
    Complex upper{}, lower{};
    for (std::size_t p = 0; p < m; ++p) {
      const Point& y = trace.points[p];
      const Point normal{std::cos(trace.angles[p]), std::sin(trace.angles[p])};
      const Complex term = kernel.normal_derivative(y, normal) * trace.values[p] -
                           trace.normal_derivatives[p] * kernel.value(y);
      (trace.angles[p] < kPi ? upper : lower) += term;
    }
    out.push_back(weight * (upper + lower));
  }
  return out;
}

}  // namespace layerscope
