#pragma once

// Experiment configuration: an INI document with sections media, profile,
// solver, measurement, imaging, noise and output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "layerscope/forward.hpp"
#include "layerscope/imaging.hpp"
#include "layerscope/surfaces.hpp"

namespace layerscope {

/// Invalid configuration. `key()` is the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct MeasurementConfig {
  double radius = 1.5;              // R
  int phaseless_receivers = 64;     // M_P
  int phaseless_incidences = 64;    // N_P
  int farfield_observations = 64;   // M_F
  int farfield_incidences = 64;     // N_F
  double farfield_radius = 0.0;     // circle used for the far-field integral; <= 0 means R
  int farfield_points = 0;          // quadrature nodes on that circle; 0 picks from k and radius
  bool complex_total = false;       // also persist u_tot on the receiver circle
};

struct NoiseConfig {
  double delta = 0.0;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  MediumPair media{6.0, 12.0};
  SurfaceProfile profile = make_profile("scaled_bump", {{"amplitude", 0.3}, {"support_halfwidth", 0.8}});
  SolverConfig solver;
  MeasurementConfig measurement;
  SamplingGrid imaging;
  NoiseConfig noise;
  std::filesystem::path output = "out";

  [[nodiscard]] double farfield_radius() const;
  [[nodiscard]] int farfield_points() const;
};

/// Parses and validates. Every failure is a ConfigError naming its key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Cross-field checks; run by parse_config and before any compute.
void validate_config(const ExperimentConfig& config);

}  // namespace layerscope
