#include "layerscope/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

#include "layerscope/io.hpp"
#include "layerscope/parallel.hpp"

namespace layerscope {

namespace {

using json = nlohmann::json;

struct DirectionOutput {
  std::vector<double> magnitudes;
  std::vector<Complex> totals;
  std::vector<Complex> far;
};

std::vector<Direction> to_directions(const std::vector<double>& angles) {
  std::vector<Direction> out;
  out.reserve(angles.size());
  for (double a : angles) out.emplace_back(a);
  return out;
}

void floor_diagnostics(const ExperimentConfig& config, SimulationResult& result) {
  const SurfaceProfile flat = make_profile("flat");
  const HelmholtzSolver solver(flat, config.media, config.solver);
  const auto angles = incidence_angles(config.measurement.phaseless_incidences);
  const std::vector<double> probes{angles.front(), angles[angles.size() / 2], angles.back()};
  for (double theta : probes) {
    const Direction d(theta);
    const FieldGrid field = solver.solve(d);
    const CircleTrace trace =
        trace_on_circle(field, config.measurement.radius, config.measurement.phaseless_receivers, true);
    double scattered = 0.0;
    double reference = 0.0;
    for (std::size_t p = 0; p < trace.points.size(); ++p) {
      scattered = std::max(scattered, std::abs(trace.values[p]));
      reference = std::max(reference, std::abs(reference_field(trace.points[p], d, config.media)));
    }
    result.solver_floor = std::max(result.solver_floor, scattered / reference);
    result.reference_residual = std::max(result.reference_residual, solver.reference_residual(d));
  }
}

const char* sampling_name(CoefficientSampling s) {
  return s == CoefficientSampling::CellAverage ? "cell_average" : "pointwise";
}

const char* solver_name(LinearSolverKind k) {
  return k == LinearSolverKind::Direct ? "direct" : "iterative";
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string file_name(ImageKind kind) {
  switch (kind) {
    case ImageKind::Phaseless: return "phaseless.csv";
    case ImageKind::FarField: return "farfield.csv";
    case ImageKind::IsDiagnostic: return "complex_total.csv";
  }
  return {};
}

void expect_shape(const std::filesystem::path& path, Eigen::Index rows, Eigen::Index cols, int m, int n) {
  if (rows != m || cols != n) {
    throw std::runtime_error(path.string() + ": shape " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " does not match meta.json (" + std::to_string(m) +
                             "x" + std::to_string(n) + ")");
  }
}

void expect_angles(const json& stored, const std::vector<double>& expected, const char* what) {
  if (stored.get<std::vector<double>>() != expected) {
    throw std::runtime_error(std::string("meta.json: ") + what + " are not the midpoint grid");
  }
}

}  // namespace

SimulationResult simulate(const ExperimentConfig& config, unsigned threads) {
  validate_config(config);
  const MeasurementConfig& m = config.measurement;
  const MediumPair& media = config.media;
  const HelmholtzSolver solver(config.profile, media, config.solver);

  const auto p_angles = incidence_angles(m.phaseless_incidences);
  const auto f_angles = incidence_angles(m.farfield_incidences);
  std::vector<double> all = p_angles;
  all.insert(all.end(), f_angles.begin(), f_angles.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  auto member = [](const std::vector<double>& set, double a) {
    return std::binary_search(set.begin(), set.end(), a);
  };

  const auto observations = to_directions(receiver_angles(m.farfield_observations));
  const double rf = config.farfield_radius();
  const int rf_points = config.farfield_points();

  std::vector<DirectionOutput> outputs(all.size());
  parallel_for(all.size(), threads, [&](std::size_t i) {
    const Direction d(all[i]);
    const FieldGrid field = solver.solve(d);
    DirectionOutput& out = outputs[i];
    if (member(p_angles, all[i])) {
      const CircleTrace trace = trace_on_circle(field, m.radius, m.phaseless_receivers, true);
      out.magnitudes = phaseless_total(trace, d, media);
      if (m.complex_total) {
        for (std::size_t p = 0; p < trace.points.size(); ++p) {
          out.totals.push_back(trace.values[p] + reference_field(trace.points[p], d, media));
        }
      }
    }
    if (member(f_angles, all[i])) {
      const CircleTrace full = trace_on_circle(field, rf, rf_points, false);
      out.far = far_field(full, media, observations);
    }
  });

  auto slot = [&](double a) {
    return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), a) - all.begin());
  };
  Eigen::MatrixXd magnitudes(m.phaseless_receivers, m.phaseless_incidences);
  Eigen::MatrixXcd totals(m.phaseless_receivers, m.phaseless_incidences);
  for (int q = 0; q < m.phaseless_incidences; ++q) {
    const DirectionOutput& out = outputs[slot(p_angles[static_cast<std::size_t>(q)])];
    for (int p = 0; p < m.phaseless_receivers; ++p) {
      magnitudes(p, q) = out.magnitudes[static_cast<std::size_t>(p)];
      if (m.complex_total) totals(p, q) = out.totals[static_cast<std::size_t>(p)];
    }
  }
  Eigen::MatrixXcd far(m.farfield_observations, m.farfield_incidences);
  for (int q = 0; q < m.farfield_incidences; ++q) {
    const DirectionOutput& out = outputs[slot(f_angles[static_cast<std::size_t>(q)])];
    for (int p = 0; p < m.farfield_observations; ++p) far(p, q) = out.far[static_cast<std::size_t>(p)];
  }

  SimulationResult result{MeasurementSet::phaseless(std::move(magnitudes), m.radius, media),
                          MeasurementSet::far_field(std::move(far), media),
                          std::nullopt,
                          0.0,
                          0.0,
                          solver.layout(),
                          rf,
                          rf_points};
  if (m.complex_total) result.complex_total = MeasurementSet::complex_total(std::move(totals), m.radius, media);
  floor_diagnostics(config, result);
  return result;
}

void write_simulation(const SimulationResult& result, const ExperimentConfig& config,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_real_csv(dir / "phaseless.csv", result.phaseless.magnitudes);
  write_complex_csv(dir / "farfield.csv", result.farfield.values);
  if (result.complex_total) write_complex_csv(dir / "complex_total.csv", result.complex_total->values);

  const SolverConfig& s = config.solver;
  json profile{{"name", config.profile.name()}, {"params", json::object()}};
  for (const auto& [k, v] : config.profile.params()) profile["params"][k] = v;
  json meta{
      {"k_plus", config.media.k_plus()},
      {"k_minus", config.media.k_minus()},
      {"profile", profile},
      {"R", config.measurement.radius},
      {"M", result.phaseless.receivers()},
      {"N", result.phaseless.incidences()},
      {"angle_convention", "midpoint"},
      {"receiver_angles", result.phaseless.receiver_angles},
      {"incidence_angles", result.phaseless.incidence_angles},
      {"solver_floor", result.solver_floor},
      {"reference_residual", result.reference_residual},
      {"complex_total", result.complex_total.has_value()},
      {"farfield",
       {{"M", result.farfield.receivers()},
        {"N", result.farfield.incidences()},
        {"observation_angles", result.farfield.receiver_angles},
        {"incidence_angles", result.farfield.incidence_angles},
        {"radius", result.farfield_radius},
        {"quadrature_points", result.farfield_points}}},
      {"solver",
       {{"box", {s.box.x1_min, s.box.x1_max, s.box.x2_min, s.box.x2_max}},
        {"points_per_wavelength", s.points_per_wavelength},
        {"spacing", result.layout.spacing},
        {"pml_nodes", result.layout.pml_nodes},
        {"pml_strength", s.pml_strength},
        {"unknowns", result.layout.unknowns()},
        {"linear_solver", solver_name(s.linear_solver)},
        {"sampling", sampling_name(s.sampling)}}},
  };
  write_json(dir / "meta.json", meta);
}

ImageKind parse_image_kind(const std::string& text) {
  if (text == "phaseless") return ImageKind::Phaseless;
  if (text == "farfield") return ImageKind::FarField;
  if (text == "is_diagnostic") return ImageKind::IsDiagnostic;
  throw std::invalid_argument("unknown image kind '" + text + "' (phaseless, farfield, is_diagnostic)");
}

std::string to_string(ImageKind kind) {
  switch (kind) {
    case ImageKind::Phaseless: return "phaseless";
    case ImageKind::FarField: return "farfield";
    case ImageKind::IsDiagnostic: return "is_diagnostic";
  }
  return {};
}

MeasurementSet load_measurements(const std::filesystem::path& data_dir, ImageKind kind) {
  const json meta = read_json(data_dir / "meta.json");
  try {
    if (meta.at("angle_convention") != "midpoint") {
      throw std::runtime_error("meta.json: unsupported angle_convention");
    }
    const MediumPair media(meta.at("k_plus").get<double>(), meta.at("k_minus").get<double>());
    const std::filesystem::path path = data_dir / file_name(kind);
    if (!std::filesystem::exists(path)) throw std::runtime_error("missing " + path.string());

    MeasurementSet set = [&] {
      if (kind == ImageKind::FarField) {
        const json& f = meta.at("farfield");
        Eigen::MatrixXcd data = read_complex_csv(path);
        expect_shape(path, data.rows(), data.cols(), f.at("M").get<int>(), f.at("N").get<int>());
        MeasurementSet s = MeasurementSet::far_field(std::move(data), media);
        expect_angles(f.at("observation_angles"), s.receiver_angles, "far-field observation angles");
        expect_angles(f.at("incidence_angles"), s.incidence_angles, "far-field incidence angles");
        return s;
      }
      const double radius = meta.at("R").get<double>();
      const int m = meta.at("M").get<int>();
      const int n = meta.at("N").get<int>();
      MeasurementSet s = [&] {
        if (kind == ImageKind::Phaseless) {
          Eigen::MatrixXd data = read_real_csv(path);
          expect_shape(path, data.rows(), data.cols(), m, n);
          return MeasurementSet::phaseless(std::move(data), radius, media);
        }
        Eigen::MatrixXcd data = read_complex_csv(path);
        expect_shape(path, data.rows(), data.cols(), m, n);
        return MeasurementSet::complex_total(std::move(data), radius, media);
      }();
      expect_angles(meta.at("receiver_angles"), s.receiver_angles, "receiver angles");
      expect_angles(meta.at("incidence_angles"), s.incidence_angles, "incidence angles");
      return s;
    }();
    set.validate();
    return set;
  } catch (const json::exception& e) {
    throw std::runtime_error("meta.json: " + std::string(e.what()));
  }
}

ImageResult compute_image(const ExperimentConfig& config, const MeasurementSet& data, ImageKind kind,
                          std::uint64_t seed, unsigned threads) {
  if (data.media.k_plus() != config.media.k_plus() || data.media.k_minus() != config.media.k_minus()) {
    throw std::invalid_argument("media: config wavenumbers do not match the data");
  }
  ImageResult result;
  result.seed = seed;
  const bool perturb = config.noise.delta > 0.0 && kind != ImageKind::IsDiagnostic;
  const MeasurementSet noisy = perturb ? add_noise(data, config.noise.delta, seed) : data;
  result.noise_applied = perturb;
  switch (kind) {
    case ImageKind::Phaseless: result.image = image_phaseless(noisy, config.imaging, threads); break;
    case ImageKind::FarField: result.image = image_farfield(noisy, config.imaging, threads); break;
    case ImageKind::IsDiagnostic: result.image = i_s_diagnostic(noisy, config.imaging, threads); break;
  }
  return result;
}

void write_image(const ImageResult& result, const ExperimentConfig& config, ImageKind kind,
                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem = "image_" + to_string(kind);
  write_image_csv(dir / (stem + ".csv"), result.image);
  write_pgm(dir / (stem + ".pgm"), result.image);
  const auto& v = result.image.values;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const SamplingGrid& g = result.image.grid;
  const json meta{
      {"which", to_string(kind)},
      {"source", result.image.source},
      {"K", {{"x1_min", g.x1_min}, {"x1_max", g.x1_max}, {"x2_min", g.x2_min}, {"x2_max", g.x2_max}}},
      {"nx", g.nx},
      {"ny", g.ny},
      {"row_order", "csv rows ascending z2; pgm row 0 is the largest z2"},
      {"normalization", {{"min", *lo}, {"max", *hi}}},
      {"noise",
       {{"delta", config.noise.delta}, {"seed", result.seed}, {"applied", result.noise_applied}}},
  };
  write_json(dir / "image_meta.json", meta);
}

std::uint64_t seed_from_environment(std::uint64_t fallback) {
  const char* text = std::getenv("LAYERSCOPE_SEED");
  if (text == nullptr || *text == '\0') return fallback;
  std::uint64_t seed = 0;
  const char* end = text + std::char_traits<char>::length(text);
  const auto [ptr, ec] = std::from_chars(text, end, seed);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("LAYERSCOPE_SEED: expected an unsigned integer");
  }
  return seed;
}

}  // namespace layerscope
