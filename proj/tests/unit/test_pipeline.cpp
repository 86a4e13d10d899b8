#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "layerscope/io.hpp"
#include "layerscope/pipeline.hpp"

using namespace layerscope;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("layerscope_unit_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string small_config(const std::string& profile, const std::filesystem::path& out) {
  return "[profile]\n" + profile +
         "\n[measurement]\nM_P = 12\nN_P = 6\nM_F = 10\nN_F = 6\ncomplex_total = true\n"
         "[imaging]\nx1_min = -1\nx1_max = 1\nx2_min = -0.6\nx2_max = 0.6\nnx = 9\nny = 7\n"
         "[noise]\ndelta = 0.05\nseed = 3\n[output]\ndirectory = " +
         out.string() + "\n";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LAYERSCOPE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("flat interface data reproduce the reference wave") {
  const auto dir = scratch_dir("flat");
  const ExperimentConfig config = parse_config(small_config("name = flat", dir));
  const SimulationResult result = simulate(config, 2);
  CHECK(result.solver_floor <= 1e-2);
  const MeasurementSet& p = result.phaseless;
  double worst = 0.0;
  for (int i = 0; i < p.receivers(); ++i) {
    for (int q = 0; q < p.incidences(); ++q) {
      const Direction d(p.incidence_angles[static_cast<std::size_t>(q)]);
      worst = std::max(worst, std::abs(p.magnitudes(i, q) - std::abs(reference_field(p.receiver(i), d, config.media))));
    }
  }
  CHECK(worst <= 1e-2 * 2.0);  // |u0| <= 1 + |R0| < 2
  CHECK(result.farfield.values.cwiseAbs().maxCoeff() <= 1e-2);

  // Zero far-field data image to the pure correction energy.
  const ImageResult img = compute_image(config, MeasurementSet::far_field(Eigen::MatrixXcd::Zero(10, 6), config.media),
                                        ImageKind::FarField, 1, 1);
  CHECK(img.noise_applied);
  ExperimentConfig quiet = config;
  quiet.noise.delta = 0.0;
  const ImageResult clean = compute_image(quiet, MeasurementSet::far_field(Eigen::MatrixXcd::Zero(10, 6), config.media),
                                          ImageKind::FarField, 1, 1);
  CHECK_FALSE(clean.noise_applied);
  for (int j = 0; j < clean.image.grid.ny; ++j) {
    for (int i = 0; i < clean.image.grid.nx; ++i) {
      double acc = 0.0;
      for (double t : receiver_angles(10)) acc += std::norm(af_term(Direction(t), clean.image.grid.at(i, j), config.media));
      CHECK(std::abs(clean.image.at(i, j) - kPi / 10.0 * acc) <= 1e-10);
    }
  }
}

TEST_CASE("simulate output round-trips and reruns are byte-identical") {
  const auto dir = scratch_dir("bump");
  const ExperimentConfig config =
      parse_config(small_config("name = scaled_bump\namplitude = 0.3\nsupport_halfwidth = 0.8", dir));
  const SimulationResult result = simulate(config, 3);
  write_simulation(result, config, dir / "a");
  write_simulation(simulate(config, 1), config, dir / "b");
  for (const char* f : {"phaseless.csv", "farfield.csv", "complex_total.csv", "meta.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }

  const auto meta = nlohmann::json::parse(slurp(dir / "a" / "meta.json"));
  CHECK(meta["k_plus"] == 6.0);
  CHECK(meta["M"] == 12);
  CHECK(meta["farfield"]["N"] == 6);
  CHECK(meta["angle_convention"] == "midpoint");
  CHECK(meta["complex_total"] == true);
  CHECK(meta["profile"]["params"]["amplitude"] == 0.3);

  const MeasurementSet p = load_measurements(dir / "a", ImageKind::Phaseless);
  CHECK(p.magnitudes == result.phaseless.magnitudes);
  CHECK(*p.radius == 1.5);
  CHECK(load_measurements(dir / "a", ImageKind::FarField).values == result.farfield.values);
  CHECK(load_measurements(dir / "a", ImageKind::IsDiagnostic).values == result.complex_total->values);

  for (const ImageKind kind : {ImageKind::Phaseless, ImageKind::FarField, ImageKind::IsDiagnostic}) {
    const MeasurementSet data = load_measurements(dir / "a", kind);
    const ImageResult x = compute_image(config, data, kind, 5, 2);
    const ImageResult y = compute_image(config, data, kind, 5, 1);
    CHECK(x.image.values == y.image.values);
    CHECK(x.noise_applied == (kind != ImageKind::IsDiagnostic));
    write_image(x, config, kind, dir / "img");
    const std::string which = to_string(kind);
    CHECK(std::filesystem::exists(dir / "img" / ("image_" + which + ".csv")));
    CHECK(std::filesystem::exists(dir / "img" / ("image_" + which + ".pgm")));
    const auto im = nlohmann::json::parse(slurp(dir / "img" / "image_meta.json"));
    CHECK(im["which"] == which);
    CHECK(im["nx"] == 9);
  }

  std::filesystem::remove(dir / "a" / "complex_total.csv");
  CHECK_THROWS(load_measurements(dir / "a", ImageKind::IsDiagnostic));
  ExperimentConfig other = config;
  other.media = MediumPair(5.0, 12.0);
  CHECK_THROWS_AS(compute_image(other, result.farfield, ImageKind::FarField, 1, 1), std::invalid_argument);
}

TEST_CASE("image kinds and seeds") {
  CHECK(parse_image_kind("phaseless") == ImageKind::Phaseless);
  CHECK(parse_image_kind("farfield") == ImageKind::FarField);
  CHECK(parse_image_kind("is_diagnostic") == ImageKind::IsDiagnostic);
  CHECK_THROWS_AS(parse_image_kind("other"), std::invalid_argument);
  unsetenv("LAYERSCOPE_SEED");
  CHECK(seed_from_environment(17) == 17);
  setenv("LAYERSCOPE_SEED", "12345", 1);
  CHECK(seed_from_environment(17) == 12345);
  setenv("LAYERSCOPE_SEED", "-4", 1);
  CHECK_THROWS(seed_from_environment(17));
  unsetenv("LAYERSCOPE_SEED");
}

TEST_CASE("command-line tool end to end with exit codes") {
  const auto dir = scratch_dir("cli");
  std::ofstream(dir / "run.ini") << small_config("name = example1", dir / "out");
  std::ofstream(dir / "bad.ini") << "[media]\nk_plus = -1\n";
  const std::string cfg = (dir / "run.ini").string();
  CHECK(run_cli("simulate --config " + cfg) == 0);
  CHECK(std::filesystem::exists(dir / "out" / "meta.json"));
  for (const char* which : {"phaseless", "farfield", "is_diagnostic"}) {
    CHECK(run_cli("--threads 2 image --config " + cfg + " --data " + (dir / "out").string() + " --which " + which) == 0);
    CHECK(std::filesystem::exists(dir / "out" / (std::string("image_") + which + ".pgm")));
  }
  CHECK(run_cli("validate --suite coefficients --output " + (dir / "v").string()) == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "v" / "validate.json"));
  CHECK(report["passed"] == true);
  CHECK(report["checks"].size() >= 5);

  CHECK(run_cli("simulate --config " + (dir / "bad.ini").string()) == 2);
  CHECK(run_cli("simulate --config " + (dir / "missing.ini").string()) != 0);
  CHECK(run_cli("image --config " + cfg + " --data " + (dir / "out").string() + " --which nothing") != 0);
  CHECK(run_cli("image --config " + cfg + " --data " + dir.string() + " --which farfield") == 3);
  CHECK(run_cli("") != 0);
}
