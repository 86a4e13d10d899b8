#pragma once

// Experiment orchestration: simulate -> persist -> (noise) -> image.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "layerscope/config.hpp"
#include "layerscope/forward.hpp"
#include "layerscope/imaging.hpp"

namespace layerscope {

struct SimulationResult {
  MeasurementSet phaseless;
  MeasurementSet farfield;
  std::optional<MeasurementSet> complex_total;
  double solver_floor = 0.0;        // max|u^s| / max|u0| on the receiver arc, flat profile
  double reference_residual = 0.0;  // discrete residual of u0 relative to |k^2 u0|
  GridLayout layout;
  double farfield_radius = 0.0;
  int farfield_points = 0;
};

/// Solves once per distinct incidence direction; phaseless and far-field
/// grids share solves when their angles coincide.
SimulationResult simulate(const ExperimentConfig& config, unsigned threads = 1);

/// phaseless.csv, farfield.csv, optional complex_total.csv and meta.json.
void write_simulation(const SimulationResult& result, const ExperimentConfig& config,
                      const std::filesystem::path& dir);

enum class ImageKind { Phaseless, FarField, IsDiagnostic };
ImageKind parse_image_kind(const std::string& text);
std::string to_string(ImageKind kind);

/// Reads the measurement set for `kind` back from a simulate directory and
/// checks it against meta.json.
MeasurementSet load_measurements(const std::filesystem::path& data_dir, ImageKind kind);

struct ImageResult {
  ImageMap image;
  bool noise_applied = false;
  std::uint64_t seed = 0;
};

/// Adds noise when config.noise.delta > 0 (full-phase diagnostic data are
/// never perturbed), then evaluates the indicator on config.imaging.
ImageResult compute_image(const ExperimentConfig& config, const MeasurementSet& data, ImageKind kind,
                          std::uint64_t seed, unsigned threads = 1);

/// image_<which>.csv, image_<which>.pgm and image_meta.json.
void write_image(const ImageResult& result, const ExperimentConfig& config, ImageKind kind,
                 const std::filesystem::path& dir);

/// LAYERSCOPE_SEED when set (must be an unsigned integer), else `fallback`.
std::uint64_t seed_from_environment(std::uint64_t fallback);

}  // namespace layerscope
