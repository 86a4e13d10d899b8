#include "layerscope/imaging.hpp"

#include <cmath>
#include <stdexcept>

#include "layerscope/parallel.hpp"
#include "layerscope/rng.hpp"

namespace layerscope {

namespace {

void require_kind(const MeasurementSet& meas, MeasurementKind kind, const char* who) {
  if (meas.kind != kind) {
    throw std::invalid_argument(std::string(who) + ": expected " + to_string(kind) + " data, got " +
                                to_string(meas.kind));
  }
}

void check_grid(const SamplingGrid& grid) {
  if (grid.nx < 1 || grid.ny < 1) throw std::invalid_argument("SamplingGrid: empty grid");
  if (grid.x1_max < grid.x1_min || grid.x2_max < grid.x2_min) {
    throw std::invalid_argument("SamplingGrid: inverted region");
  }
}

Eigen::VectorXcd incidence_phases(const std::vector<double>& theta_d, const Point& z, double k) {
  Eigen::VectorXcd e(static_cast<Eigen::Index>(theta_d.size()));
  for (std::size_t q = 0; q < theta_d.size(); ++q) {
    e[static_cast<Eigen::Index>(q)] =
        std::exp(-kI * (k * (z.x1 * std::cos(theta_d[q]) + z.x2 * std::sin(theta_d[q]))));
  }
  return e;
}

// Evaluates value(z) for every sampling point into disjoint slots.
template <class Fn>
ImageMap evaluate_image(const SamplingGrid& grid, std::string source, unsigned threads, Fn&& value) {
  check_grid(grid);
  ImageMap image{grid, std::vector<double>(grid.size(), 0.0), std::move(source)};
  parallel_for(static_cast<std::size_t>(grid.ny), threads, [&](std::size_t j) {
    for (int i = 0; i < grid.nx; ++i) {
      image.values[j * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(i)] =
          value(grid.at(i, static_cast<int>(j)));
    }
  });
  return image;
}

// Mirror-wave matrix e^{i k+ x_p' . d_q}.
Eigen::MatrixXcd mirror_matrix(const MeasurementSet& meas) {
  const double k = meas.media.k_plus();
  Eigen::MatrixXcd c(meas.receivers(), meas.incidences());
  for (int p = 0; p < meas.receivers(); ++p) {
    const Point xm = meas.receiver(p).mirrored();
    for (int q = 0; q < meas.incidences(); ++q) {
      const double t = meas.incidence_angles[static_cast<std::size_t>(q)];
      c(p, q) = std::exp(kI * (k * (xm.x1 * std::cos(t) + xm.x2 * std::sin(t))));
    }
  }
  return c;
}

}  // namespace

std::string to_string(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::PhaselessTotal: return "phaseless_total";
    case MeasurementKind::ComplexTotal: return "complex_total";
    case MeasurementKind::FarField: return "far_field";
  }
  return "unknown";
}

std::vector<double> receiver_angles(int count) {
  if (count < 1) throw std::invalid_argument("receiver_angles: count must be positive");
  std::vector<double> a(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p) a[static_cast<std::size_t>(p)] = kPi * (p + 0.5) / count;
  return a;
}

std::vector<double> incidence_angles(int count) {
  if (count < 1) throw std::invalid_argument("incidence_angles: count must be positive");
  std::vector<double> a(static_cast<std::size_t>(count));
  for (int q = 0; q < count; ++q) a[static_cast<std::size_t>(q)] = kPi + kPi * (q + 0.5) / count;
  return a;
}

Point MeasurementSet::receiver(int p) const {
  if (!radius) throw std::logic_error("MeasurementSet::receiver: far-field data have no radius");
  const double t = receiver_angles.at(static_cast<std::size_t>(p));
  return {*radius * std::cos(t), *radius * std::sin(t)};
}

MeasurementSet MeasurementSet::phaseless(Eigen::MatrixXd data, double radius, MediumPair media) {
  MeasurementSet m{MeasurementKind::PhaselessTotal, media, radius,
                   layerscope::receiver_angles(static_cast<int>(data.rows())),
                   layerscope::incidence_angles(static_cast<int>(data.cols())), std::move(data), {}};
  m.validate();
  return m;
}

MeasurementSet MeasurementSet::complex_total(Eigen::MatrixXcd data, double radius, MediumPair media) {
  MeasurementSet m{MeasurementKind::ComplexTotal, media, radius,
                   layerscope::receiver_angles(static_cast<int>(data.rows())),
                   layerscope::incidence_angles(static_cast<int>(data.cols())), {}, std::move(data)};
  m.validate();
  return m;
}

MeasurementSet MeasurementSet::far_field(Eigen::MatrixXcd data, MediumPair media) {
  MeasurementSet m{MeasurementKind::FarField, media, std::nullopt,
                   layerscope::receiver_angles(static_cast<int>(data.rows())),
                   layerscope::incidence_angles(static_cast<int>(data.cols())), {}, std::move(data)};
  m.validate();
  return m;
}

void MeasurementSet::validate() const {
  const Eigen::Index rows = receivers();
  const Eigen::Index cols = incidences();
  if (rows == 0 || cols == 0) throw std::invalid_argument("MeasurementSet: empty angle grids");
  for (double t : receiver_angles) {
    if (!(t > 0.0 && t < kPi)) throw std::invalid_argument("MeasurementSet: receiver angle outside (0, pi)");
  }
  for (double t : incidence_angles) {
    if (!(t > kPi && t < kTwoPi)) {
      throw std::invalid_argument("MeasurementSet: incidence angle outside (pi, 2pi)");
    }
  }
  if (kind == MeasurementKind::PhaselessTotal) {
    if (magnitudes.rows() != rows || magnitudes.cols() != cols) {
      throw std::invalid_argument("MeasurementSet: phaseless matrix shape mismatch");
    }
    if (!magnitudes.allFinite()) throw std::invalid_argument("MeasurementSet: non-finite data");
  } else {
    if (values.rows() != rows || values.cols() != cols) {
      throw std::invalid_argument("MeasurementSet: complex matrix shape mismatch");
    }
    if (!values.allFinite()) throw std::invalid_argument("MeasurementSet: non-finite data");
  }
  if (kind != MeasurementKind::FarField && !(radius && *radius > 0.0)) {
    throw std::invalid_argument("MeasurementSet: circle data need a positive radius");
  }
}

Point SamplingGrid::at(int i, int j) const {
  const double fx = nx > 1 ? static_cast<double>(i) / (nx - 1) : 0.5;
  const double fy = ny > 1 ? static_cast<double>(j) / (ny - 1) : 0.5;
  return {x1_min + fx * (x1_max - x1_min), x2_min + fy * (x2_max - x2_min)};
}

SamplingGrid default_sampling_grid(const MediumPair& media, const SurfaceProfile& profile) {
  const double s = profile.support_halfwidth() > 0.0 ? profile.support_halfwidth() : 0.8;
  const double spacing = kTwoPi / media.k_plus() / 10.0;
  SamplingGrid g;
  g.x1_min = -1.25 * s;
  g.x1_max = 1.25 * s;
  g.x2_min = -0.75 * s;
  g.x2_max = 0.75 * s;
  g.nx = static_cast<int>(std::ceil((g.x1_max - g.x1_min) / spacing)) + 1;
  g.ny = static_cast<int>(std::ceil((g.x2_max - g.x2_min) / spacing)) + 1;
  return g;
}

// ---------------------------------------------------------------------------

MeasurementSet add_noise(const MeasurementSet& meas, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be nonnegative");
  MeasurementSet out = meas;
  if (meas.kind == MeasurementKind::ComplexTotal) {
    throw std::invalid_argument("add_noise: only phaseless_total and far_field data take noise");
  }
  if (delta == 0.0) return out;
  const int m = meas.receivers();
  for (int q = 0; q < meas.incidences(); ++q) {
    Pcg32 rng(seed, static_cast<std::uint64_t>(q));
    if (meas.kind == MeasurementKind::PhaselessTotal) {
      Eigen::VectorXd xi(m);
      for (int p = 0; p < m; ++p) xi[p] = rng.next_normal();
      const double scale = delta * meas.magnitudes.col(q).norm() / xi.norm();
      out.magnitudes.col(q) += scale * xi;
    } else {
      Eigen::VectorXcd xi(m);
      for (int p = 0; p < m; ++p) {
        const double re = rng.next_normal();
        const double im = rng.next_normal();
        xi[p] = {re, im};
      }
      const double scale = delta * meas.values.col(q).norm() / xi.norm();
      out.values.col(q) += scale * xi;
    }
  }
  return out;
}

Complex background_a1(const Point& x, double theta_d, const MediumPair& media) {
  const Complex r0 = reflection_coeff_incident(theta_d, media.ratio());
  return 1.0 + std::norm(r0) +
         std::conj(r0) * std::exp(kI * (2.0 * media.k_plus() * x.x2 * std::sin(theta_d)));
}

Complex translation_a2(const Point& x, double theta_d, const Point& z, const MediumPair& media) {
  const Point xm = x.mirrored();
  const Point zm = z.mirrored();
  const double proj = (xm.x1 - zm.x1) * std::cos(theta_d) + (xm.x2 - zm.x2) * std::sin(theta_d);
  return std::exp(kI * (media.k_plus() * proj));
}

Complex af_term(const Direction& xhat, const Point& z, const MediumPair& media) {
  if (xhat.half() != HalfPlane::Upper) {
    throw std::domain_error("af_term: observation direction must point upward");
  }
  const double k = media.k_plus();
  const Complex pref = std::sqrt(kTwoPi / k) * std::exp(-kI * (kPi / 4.0));
  const Complex r = reflection_coeff(xhat.theta(), media.ratio());
  const Point zm = z.mirrored();
  return pref * (r * std::exp(-kI * (k * xhat.unit().dot(zm))) -
                 std::exp(-kI * (k * xhat.unit().dot(z))));
}

// ---------------------------------------------------------------------------

ImageMap detail::image_phaseless_intensity(const Eigen::MatrixXcd& intensity,
                                           const MeasurementSet& layout, const SamplingGrid& grid,
                                           unsigned threads) {
  const int m = layout.receivers();
  const int n = layout.incidences();
  if (intensity.rows() != m || intensity.cols() != n) {
    throw std::invalid_argument("image_phaseless: intensity shape mismatch");
  }
  const double k = layout.media.k_plus();
  const double r = layout.radius.value();
  // B_pq = (|u_tot|^2 - A1) e^{i k+ x_p . d_q}; the z-dependence factors out.
  Eigen::MatrixXcd b(m, n);
  for (int p = 0; p < m; ++p) {
    const Point x = layout.receiver(p);
    for (int q = 0; q < n; ++q) {
      const double t = layout.incidence_angles[static_cast<std::size_t>(q)];
      b(p, q) = (intensity(p, q) - background_a1(x, t, layout.media)) *
                std::exp(kI * (k * (x.x1 * std::cos(t) + x.x2 * std::sin(t))));
    }
  }
  const Eigen::MatrixXcd c = mirror_matrix(layout);
  const double weight = r * kPi * kPi * kPi / (static_cast<double>(m) * n * n);
  return evaluate_image(grid, "phaseless", threads, [&](const Point& z) {
    const Eigen::VectorXcd e = incidence_phases(layout.incidence_angles, z, k);
    const Eigen::VectorXcd f = incidence_phases(layout.incidence_angles, z.mirrored(), k);
    const Eigen::VectorXcd inner = b * e - c * f;
    return weight * inner.squaredNorm();
  });
}

ImageMap image_phaseless(const MeasurementSet& meas, const SamplingGrid& grid, unsigned threads) {
  require_kind(meas, MeasurementKind::PhaselessTotal, "image_phaseless");
  meas.validate();
  const Eigen::MatrixXcd intensity = meas.magnitudes.array().square().cast<Complex>();
  return detail::image_phaseless_intensity(intensity, meas, grid, threads);
}

ImageMap image_farfield(const MeasurementSet& meas, const SamplingGrid& grid, unsigned threads) {
  require_kind(meas, MeasurementKind::FarField, "image_farfield");
  meas.validate();
  const int m = meas.receivers();
  const int n = meas.incidences();
  const double k = meas.media.k_plus();
  std::vector<Direction> xhats;
  xhats.reserve(static_cast<std::size_t>(m));
  for (double t : meas.receiver_angles) xhats.emplace_back(t);
  return evaluate_image(grid, "farfield", threads, [&](const Point& z) {
    const Eigen::VectorXcd e = incidence_phases(meas.incidence_angles, z, k);
    const Eigen::VectorXcd inner = (kPi / n) * (meas.values * e);
    double acc = 0.0;
    for (int p = 0; p < m; ++p) {
      acc += std::norm(inner[p] + af_term(xhats[static_cast<std::size_t>(p)], z, meas.media));
    }
    return kPi / m * acc;
  });
}

ImageMap i_s_diagnostic(const MeasurementSet& meas, const SamplingGrid& grid, unsigned threads) {
  require_kind(meas, MeasurementKind::ComplexTotal, "i_s_diagnostic");
  meas.validate();
  const int m = meas.receivers();
  const int n = meas.incidences();
  const double k = meas.media.k_plus();
  const double r = meas.radius.value();
  // u_tot - u_i per receiver and incidence.
  Eigen::MatrixXcd scattered_plus_reflected(m, n);
  for (int p = 0; p < m; ++p) {
    const Point x = meas.receiver(p);
    for (int q = 0; q < n; ++q) {
      const double t = meas.incidence_angles[static_cast<std::size_t>(q)];
      scattered_plus_reflected(p, q) =
          meas.values(p, q) - std::exp(kI * (k * (x.x1 * std::cos(t) + x.x2 * std::sin(t))));
    }
  }
  const Eigen::MatrixXcd c = mirror_matrix(meas);
  return evaluate_image(grid, "is_diagnostic", threads, [&](const Point& z) {
    const Eigen::VectorXcd e = incidence_phases(meas.incidence_angles, z, k);
    const Eigen::VectorXcd f = incidence_phases(meas.incidence_angles, z.mirrored(), k);
    const Eigen::VectorXcd u = (kPi / n) * (scattered_plus_reflected * e - c * f);
    return kPi * r / m * u.squaredNorm();
  });
}

}  // namespace layerscope
