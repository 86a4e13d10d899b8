#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "layerscope/config.hpp"
#include "layerscope/pipeline.hpp"
#include "layerscope/validation.hpp"

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitRuntime = 3;

int cmd_simulate(const std::string& config_path, unsigned threads) {
  const auto config = layerscope::load_config(config_path);
  const auto result = layerscope::simulate(config, threads);
  layerscope::write_simulation(result, config, config.output);
  std::cout << "simulate: wrote " << config.output.string() << " (solver_floor "
            << result.solver_floor << ", reference_residual " << result.reference_residual << ")\n";
  return 0;
}

int cmd_image(const std::string& config_path, const std::string& data_dir, const std::string& which,
              unsigned threads) {
  const auto config = layerscope::load_config(config_path);
  const auto kind = layerscope::parse_image_kind(which);
  const auto data = layerscope::load_measurements(data_dir, kind);
  const auto seed = layerscope::seed_from_environment(config.noise.seed);
  const auto result = layerscope::compute_image(config, data, kind, seed, threads);
  layerscope::write_image(result, config, kind, config.output);
  std::cout << "image: wrote image_" << which << " to " << config.output.string() << "\n";
  return 0;
}

int cmd_validate(const std::string& suite, const std::string& output) {
  const auto checks = layerscope::run_validation(suite);
  std::filesystem::create_directories(output);
  const auto path = std::filesystem::path(output) / "validate.json";
  std::ofstream(path) << layerscope::validation_report(suite, checks) << '\n';
  int failures = 0;
  for (const auto& c : checks) {
    if (!c.passed) {
      ++failures;
      std::cerr << "FAIL " << c.suite << ": " << c.name << " value " << c.value << " threshold "
                << c.threshold << '\n';
    }
  }
  std::cout << "validate " << suite << ": " << checks.size() - static_cast<std::size_t>(failures) << "/"
            << checks.size() << " passed, report " << path.string() << '\n';
  return failures == 0 ? 0 : kExitFailedChecks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward simulation and direct imaging of a locally rough interface"};
  app.require_subcommand(1);
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string config_path;
  std::string data_dir;
  std::string which;
  std::string suite = "all";
  std::string output = ".";

  auto* simulate = app.add_subcommand("simulate", "Generate phaseless and far-field data");
  simulate->add_option("--config", config_path, "INI experiment file")->required()->check(CLI::ExistingFile);

  auto* image = app.add_subcommand("image", "Evaluate an imaging function from simulated data");
  image->add_option("--config", config_path, "INI experiment file")->required()->check(CLI::ExistingFile);
  image->add_option("--data", data_dir, "Directory written by simulate")->required()->check(CLI::ExistingDirectory);
  image->add_option("--which", which, "phaseless | farfield | is_diagnostic")
      ->required()
      ->check(CLI::IsMember({"phaseless", "farfield", "is_diagnostic"}));

  auto* validate = app.add_subcommand("validate", "Run the self-check suites");
  validate->add_option("--suite", suite, "coefficients | solver | asymptotics | all")
      ->check(CLI::IsMember({"coefficients", "solver", "asymptotics", "all"}));
  validate->add_option("--output", output, "Directory for validate.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(config_path, threads);
    if (*image) return cmd_image(config_path, data_dir, which, threads);
    return cmd_validate(suite, output);
  } catch (const layerscope::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
