#include "layerscope/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace layerscope {

namespace {

namespace pt = boost::property_tree;

using Section = std::map<std::string, std::string>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"media", {"k_plus", "k_minus"}},
      {"profile", {}},  // name plus free-form profile parameters
      {"solver",
       {"x1_min", "x1_max", "x2_min", "x2_max", "points_per_wavelength", "pml_thickness",
        "pml_strength", "linear_solver", "iterative_tolerance", "sampling"}},
      {"measurement",
       {"R", "M_P", "N_P", "M_F", "N_F", "farfield_radius", "farfield_points", "complex_total"}},
      {"imaging", {"x1_min", "x1_max", "x2_min", "x2_max", "nx", "ny"}},
      {"noise", {"delta", "seed"}},
      {"output", {"directory"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return v;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& text) {
  Int v{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

class Reader {
 public:
  Reader(std::string section, const Section* values) : section_(std::move(section)), values_(values) {}

  [[nodiscard]] bool has(const std::string& key) const { return values_ && values_->count(key) > 0; }
  [[nodiscard]] std::string path(const std::string& key) const { return section_ + "." + key; }

  void read(const std::string& key, double& out) const {
    if (has(key)) out = to_double(path(key), values_->at(key));
  }
  void read(const std::string& key, int& out) const {
    if (has(key)) out = to_integer<int>(path(key), values_->at(key));
  }
  void read(const std::string& key, std::uint64_t& out) const {
    if (has(key)) out = to_integer<std::uint64_t>(path(key), values_->at(key));
  }
  void read(const std::string& key, bool& out) const {
    if (has(key)) out = to_bool(path(key), values_->at(key));
  }
  void read(const std::string& key, std::string& out) const {
    if (has(key)) out = values_->at(key);
  }

  /// All four keys or none; returns whether they were present.
  bool read_extents(double& x1_min, double& x1_max, double& x2_min, double& x2_max) const {
    const std::vector<std::string> names{"x1_min", "x1_max", "x2_min", "x2_max"};
    int present = 0;
    for (const auto& n : names) present += has(n) ? 1 : 0;
    if (present == 0) return false;
    if (present != 4) {
      for (const auto& n : names) {
        if (!has(n)) throw ConfigError(path(n), "required when any extent is given");
      }
    }
    read("x1_min", x1_min);
    read("x1_max", x1_max);
    read("x2_min", x2_min);
    read("x2_max", x2_max);
    return true;
  }

 private:
  std::string section_;
  const Section* values_;
};

std::map<std::string, Section> parse_sections(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::map<std::string, Section> sections;
  for (const auto& [name, body] : tree) {
    const auto known = known_keys().find(name);
    if (body.empty() && !body.data().empty()) throw ConfigError(name, "key outside of any section");
    if (known == known_keys().end()) throw ConfigError(name, "unknown section");
    Section& section = sections[name];
    for (const auto& [key, value] : body) {
      if (name != "profile" && known->second.count(key) == 0) {
        throw ConfigError(name + "." + key, "unknown key");
      }
      section[key] = trim(value.data());
    }
  }
  return sections;
}

const Section* find_section(const std::map<std::string, Section>& sections, const std::string& name) {
  const auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

SamplingGrid parse_imaging(const Reader& r, const MediumPair& media, const SurfaceProfile& profile) {
  SamplingGrid grid = default_sampling_grid(media, profile);
  const bool region = r.read_extents(grid.x1_min, grid.x1_max, grid.x2_min, grid.x2_max);
  if (r.has("nx") != r.has("ny")) {
    throw ConfigError(r.path(r.has("nx") ? "ny" : "nx"), "nx and ny must be given together");
  }
  if (r.has("nx")) {
    r.read("nx", grid.nx);
    r.read("ny", grid.ny);
  } else if (region) {
    const double spacing = kTwoPi / media.k_plus() / 10.0;
    grid.nx = std::max(2, static_cast<int>(std::lround((grid.x1_max - grid.x1_min) / spacing)) + 1);
    grid.ny = std::max(2, static_cast<int>(std::lround((grid.x2_max - grid.x2_min) / spacing)) + 1);
  }
  return grid;
}

}  // namespace

double ExperimentConfig::farfield_radius() const {
  return measurement.farfield_radius > 0.0 ? measurement.farfield_radius : measurement.radius;
}

int ExperimentConfig::farfield_points() const {
  if (measurement.farfield_points > 0) return measurement.farfield_points;
  const double k_max = std::max(media.k_plus(), media.k_minus());
  const int n = std::max(256, static_cast<int>(std::ceil(8.0 * k_max * farfield_radius())));
  return n + (n % 2);
}

void validate_config(const ExperimentConfig& config) {
  const MeasurementConfig& m = config.measurement;
  try {
    check_solver_config(config.solver, config.media, config.profile, m.radius);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(':');
    if (colon == std::string::npos) throw ConfigError("solver", what);
    throw ConfigError(what.substr(0, colon), trim(what.substr(colon + 1)));
  }
  const std::pair<const char*, int> counts[] = {{"measurement.M_P", m.phaseless_receivers},
                                                {"measurement.N_P", m.phaseless_incidences},
                                                {"measurement.M_F", m.farfield_observations},
                                                {"measurement.N_F", m.farfield_incidences}};
  for (const auto& [key, n] : counts) {
    if (n < 1) throw ConfigError(key, "must be at least 1");
  }
  const double rf = config.farfield_radius();
  const double enclosing =
      std::hypot(config.profile.support_halfwidth(), config.profile.amplitude_bound());
  if (rf > m.radius) throw ConfigError("measurement.farfield_radius", "must not exceed measurement.R");
  if (!(rf > enclosing)) {
    throw ConfigError("measurement.farfield_radius", "circle must enclose the perturbation");
  }
  if (m.farfield_points != 0 && (m.farfield_points < 16 || m.farfield_points % 2 != 0)) {
    throw ConfigError("measurement.farfield_points", "must be an even number of at least 16");
  }
  const SamplingGrid& g = config.imaging;
  if (!(g.x1_min < g.x1_max)) throw ConfigError("imaging.x1_max", "must exceed imaging.x1_min");
  if (!(g.x2_min < g.x2_max)) throw ConfigError("imaging.x2_max", "must exceed imaging.x2_min");
  if (g.nx < 2) throw ConfigError("imaging.nx", "must be at least 2");
  if (g.ny < 2) throw ConfigError("imaging.ny", "must be at least 2");
  if (!(config.noise.delta >= 0.0)) throw ConfigError("noise.delta", "must be nonnegative");
  if (config.output.empty()) throw ConfigError("output.directory", "must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
  const auto sections = parse_sections(text);
  ExperimentConfig config;

  const Reader media("media", find_section(sections, "media"));
  double k_plus = config.media.k_plus();
  double k_minus = config.media.k_minus();
  media.read("k_plus", k_plus);
  media.read("k_minus", k_minus);
  try {
    config.media = MediumPair(k_plus, k_minus);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("media.k_plus", e.what());
  }

  if (const Section* profile = find_section(sections, "profile")) {
    const Reader r("profile", profile);
    if (!r.has("name")) throw ConfigError("profile.name", "required");
    std::map<std::string, double> params;
    for (const auto& [key, value] : *profile) {
      if (key != "name") params[key] = to_double("profile." + key, value);
    }
    try {
      config.profile = make_profile(profile->at("name"), params);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("profile", e.what());
    }
  }

  const Reader meas("measurement", find_section(sections, "measurement"));
  MeasurementConfig& m = config.measurement;
  meas.read("R", m.radius);
  meas.read("M_P", m.phaseless_receivers);
  meas.read("N_P", m.phaseless_incidences);
  meas.read("M_F", m.farfield_observations);
  meas.read("N_F", m.farfield_incidences);
  meas.read("farfield_radius", m.farfield_radius);
  meas.read("farfield_points", m.farfield_points);
  meas.read("complex_total", m.complex_total);
  if (!(m.radius > 0.0)) throw ConfigError("measurement.R", "must be positive");

  const Reader solver("solver", find_section(sections, "solver"));
  config.solver = default_solver_config(config.media, m.radius);
  SolverConfig& s = config.solver;
  solver.read_extents(s.box.x1_min, s.box.x1_max, s.box.x2_min, s.box.x2_max);
  solver.read("points_per_wavelength", s.points_per_wavelength);
  solver.read("pml_thickness", s.pml_thickness);
  solver.read("pml_strength", s.pml_strength);
  solver.read("iterative_tolerance", s.iterative_tolerance);
  if (solver.has("linear_solver")) {
    std::string kind;
    solver.read("linear_solver", kind);
    if (kind == "direct") {
      s.linear_solver = LinearSolverKind::Direct;
    } else if (kind == "iterative") {
      s.linear_solver = LinearSolverKind::Iterative;
    } else {
      throw ConfigError("solver.linear_solver", "expected direct or iterative, got '" + kind + "'");
    }
  }
  if (solver.has("sampling")) {
    std::string kind;
    solver.read("sampling", kind);
    if (kind == "cell_average") {
      s.sampling = CoefficientSampling::CellAverage;
    } else if (kind == "pointwise") {
      s.sampling = CoefficientSampling::Pointwise;
    } else {
      throw ConfigError("solver.sampling", "expected cell_average or pointwise, got '" + kind + "'");
    }
  }

  config.imaging =
      parse_imaging(Reader("imaging", find_section(sections, "imaging")), config.media, config.profile);

  const Reader noise("noise", find_section(sections, "noise"));
  noise.read("delta", config.noise.delta);
  noise.read("seed", config.noise.seed);

  const Reader output("output", find_section(sections, "output"));
  std::string dir = config.output.string();
  output.read("directory", dir);
  config.output = dir;

  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace layerscope
