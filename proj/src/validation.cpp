#include "layerscope/validation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "layerscope/asymptotics.hpp"
#include "layerscope/forward.hpp"
#include "layerscope/layered_core.hpp"
#include "layerscope/rng.hpp"

namespace layerscope {

namespace {

constexpr std::uint64_t kValidationSeed = 20240601;

CheckResult at_most(std::string suite, std::string name, double value, double threshold,
                    std::string detail = {}) {
  return {std::move(suite), std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

double uniform(Pcg32& rng, double lo, double hi) { return lo + (hi - lo) * rng.next_double(); }

double random_ratio(Pcg32& rng) {
  for (;;) {
    const double n = uniform(rng, 0.1, 10.0);
    if (std::abs(n - 1.0) > 1e-3) return n;
  }
}

void coefficient_suite(std::vector<CheckResult>& out) {
  const std::string s = "coefficients";
  Pcg32 rng(kValidationSeed, 0);

  double normal = 0.0;
  double sum = 0.0;
  double modulus = 0.0;
  double mirror = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double n = random_ratio(rng);
    normal = std::max(normal, std::abs(reflection_coeff(kPi / 2.0, n) - (1.0 - n) / (1.0 + n)));
    const double theta = uniform(rng, 1e-3, kPi - 1e-3);
    sum = std::max(sum, std::abs(transmission_coeff(theta, n) - reflection_coeff(theta, n) - 1.0));
    mirror = std::max(mirror, std::abs(reflection_coeff_incident(kTwoPi - theta, n) -
                                       reflection_coeff(theta, n)));
    const double lower = uniform(rng, 0.1, 0.95);
    const double c = uniform(rng, lower, 1.0) * (rng.next_double() < 0.5 ? -1.0 : 1.0);
    const double t = std::acos(std::clamp(c, -1.0, 1.0));
    if (std::abs(std::cos(t)) > lower && t > 0.0 && t < kPi) {
      modulus = std::max(modulus, std::abs(std::abs(reflection_coeff(t, lower)) - 1.0));
    }
  }
  out.push_back(at_most(s, "normal_incidence_closed_form", normal, 1e-12));
  out.push_back(at_most(s, "transmission_is_reflection_plus_one", sum, 1e-12));
  out.push_back(at_most(s, "total_reflection_unit_modulus", modulus, 1e-13));
  out.push_back(at_most(s, "incident_reflection_mirror_identity", mirror, 1e-14));

  double kernel = 0.0;
  double continuity = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const MediumPair media(uniform(rng, 1.0, 20.0), uniform(rng, 1.0, 20.0) + 1e-3);
    const Direction xhat(uniform(rng, 1e-3, kPi - 1e-3));
    const Point y{uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0)};
    const Complex c = std::exp(kI * (kPi / 4.0)) / std::sqrt(8.0 * kPi * media.k_plus());
    kernel = std::max(kernel, std::abs(farfield_kernel(xhat, y, media) -
                                       c * reference_field(y, xhat.opposite(), media)));

    const ReferenceWave u0(Direction(uniform(rng, kPi + 1e-3, kTwoPi - 1e-3)), media);
    const Point x{uniform(rng, -3.0, 3.0), 0.0};
    const auto gu = u0.upper_gradient(x);
    const auto gl = u0.lower_gradient(x);
    continuity = std::max({continuity, std::abs(u0.upper_value(x) - u0.lower_value(x)),
                           std::abs(gu[1] - gl[1]) / media.k_plus()});
  }
  out.push_back(at_most(s, "farfield_kernel_reciprocity", kernel, 1e-12));

  // 5-point residual of u0 off the interface; second order under halving h.
  double worst_order = 1e300;
  for (int i = 0; i < 20; ++i) {
    const MediumPair media(uniform(rng, 2.0, 12.0), uniform(rng, 2.0, 12.0) + 1e-3);
    const ReferenceWave u0(Direction(uniform(rng, kPi + 0.1, kTwoPi - 0.1)), media);
    const Point x{uniform(rng, -1.0, 1.0), uniform(rng, 0.3, 1.0) * (i % 2 == 0 ? 1.0 : -1.0)};
    const double k = x.x2 > 0.0 ? media.k_plus() : media.k_minus();
    auto residual = [&](double h) {
      const Complex lap = (u0.value({x.x1 + h, x.x2}) + u0.value({x.x1 - h, x.x2}) +
                           u0.value({x.x1, x.x2 + h}) + u0.value({x.x1, x.x2 - h}) -
                           4.0 * u0.value(x)) / (h * h);
      return std::abs(lap + k * k * u0.value(x));
    };
    const double h = 0.2 / std::max(media.k_plus(), media.k_minus());
    worst_order = std::min(worst_order, std::log2(residual(h) / residual(0.5 * h)));
  }
  out.push_back({s, "reference_wave_stencil_order", worst_order >= 1.9, worst_order, 1.9,
                 "observed order off the interface, minimum over samples"});
  out.push_back(at_most(s, "reference_wave_interface_continuity", continuity, 1e-12));
}

void solver_suite(std::vector<CheckResult>& out) {
  const std::string s = "solver";
  const MediumPair media(6.0, 12.0);
  const double radius = 1.5;
  const SolverConfig config = default_solver_config(media, radius);

  const HelmholtzSolver flat(make_profile("flat"), media, config);
  double floor = 0.0;
  for (double theta : {kPi + 0.3, 1.5 * kPi, kTwoPi - 0.3}) {
    const Direction d(theta);
    const CircleTrace trace = trace_on_circle(flat.solve(d), radius, 64, true);
    double scattered = 0.0;
    double reference = 0.0;
    for (std::size_t p = 0; p < trace.points.size(); ++p) {
      scattered = std::max(scattered, std::abs(trace.values[p]));
      reference = std::max(reference, std::abs(reference_field(trace.points[p], d, media)));
    }
    floor = std::max(floor, scattered / reference);
  }
  out.push_back(at_most(s, "flat_profile_floor", floor, 1e-2, "max|u^s| / max|u0| on the receiver arc"));

  const HelmholtzSolver bump(
      make_profile("scaled_bump", {{"amplitude", 0.3}, {"support_halfwidth", 0.8}}), media, config);
  const FieldGrid field = bump.solve(Direction(1.5 * kPi));
  double asym = 0.0;
  for (int j = 0; j < field.n2(); ++j) {
    for (int i = 0; i < field.n1(); ++i) {
      asym = std::max(asym, std::abs(field.at(i, j) - field.at(field.n1() - 1 - i, j)));
    }
  }
  out.push_back(at_most(s, "even_profile_normal_incidence_symmetry", asym / field.max_abs(), 1e-6));
}

void asymptotics_suite(std::vector<CheckResult>& out) {
  const std::string s = "asymptotics";
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{-1, 1}, {-1, 2}, {-0.5, 3}}) {
    for (double lambda : {1e1, 1e2, 1e3, 1e4}) {
      const FresnelReport r = fresnel_check(a, b, lambda);
      out.push_back(at_most(s,
                            "fresnel a=" + std::to_string(a) + " b=" + std::to_string(b) +
                                " lambda=" + std::to_string(lambda),
                            r.residual, r.bound));
    }
  }

  struct VdcCase {
    std::string name;
    RealFunction phase;
    ComplexFunction amplitude;
    double a, b;
    int pieces;
  };
  const std::vector<VdcCase> catalog{
      {"linear_phase", [](double t) { return t; }, [](double) { return Complex{1.0, 0.0}; }, 0.0, 1.0, 1},
      {"quadratic_phase", [](double t) { return 0.5 * t * t + t; },
       [](double t) { return Complex{t, 0.0}; }, 0.0, 2.0, 1},
      {"cubic_phase", [](double t) { return t * t * t / 3.0 + t; },
       [](double t) { return std::exp(kI * t) * (1.0 + t * t); }, -1.0, 1.0, 2},
  };
  for (const auto& c : catalog) {
    for (double lambda : {1e1, 1e2, 1e3}) {
      const VanDerCorputReport r = vdc_bound_check(c.phase, c.amplitude, c.a, c.b, c.pieces, lambda);
      out.push_back(at_most(s, "van_der_corput " + c.name + " lambda=" + std::to_string(lambda),
                            r.numeric, r.bound));
    }
  }

  const std::vector<double> lambdas{1e2, 1e3, 1e4};
  const RemainderScalingReport rem = remainder_scaling_check(
      [](double e) { return e; }, [](double e) { return Complex{std::cos(e), 0.0}; }, 2.0, -1.0, 2.0,
      lambdas);
  out.push_back(at_most(s, "remainder_scaling_band", rem.band_ratio, 4.0));

  const std::vector<double> radii{50.0, 100.0, 200.0};
  const Point z{0.1, -0.05};
  struct SweepCase {
    std::string name;
    ExpansionKind kind;
    MediumPair media;
    double lo, hi;
  };
  const std::vector<SweepCase> sweeps{
      {"mirror_wave n=2", ExpansionKind::MirrorWave, MediumPair(6.0, 12.0), 0.3, 0.7},
      {"reflected_wave n=2", ExpansionKind::ReflectedWave, MediumPair(6.0, 12.0), 0.3, 0.7},
      {"reflected_wave n=0.5", ExpansionKind::ReflectedWave, MediumPair(12.0, 6.0), 0.45, 0.75},
  };
  for (const auto& c : sweeps) {
    const ExpansionSweep sweep = expansion_sweep(c.kind, c.media, z, radii, 48);
    for (std::size_t i = 0; i < sweep.ratios.size(); ++i) {
      const double r = sweep.ratios[i];
      out.push_back({s, c.name + " error ratio " + std::to_string(i + 1), r >= c.lo && r <= c.hi, r, c.hi,
                     "band [" + std::to_string(c.lo) + ", " + std::to_string(c.hi) + "]"});
    }
    out.push_back(at_most(s, c.name + " magnitude slope", std::abs(sweep.magnitude_slope + 0.5), 0.05,
                          "|slope + 1/2|"));
  }
}

}  // namespace

std::vector<CheckResult> run_validation(const std::string& suite) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (!all && suite != "coefficients" && suite != "solver" && suite != "asymptotics") {
    throw std::invalid_argument("unknown suite '" + suite + "' (coefficients, solver, asymptotics, all)");
  }
  if (all || suite == "coefficients") coefficient_suite(out);
  if (all || suite == "solver") solver_suite(out);
  if (all || suite == "asymptotics") asymptotics_suite(out);
  return out;
}

std::string validation_report(const std::string& suite, const std::vector<CheckResult>& checks) {
  nlohmann::json doc{{"suite", suite}};
  bool passed = true;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    passed = passed && c.passed;
    list.push_back({{"suite", c.suite},
                    {"name", c.name},
                    {"passed", c.passed},
                    {"value", c.value},
                    {"threshold", c.threshold},
                    {"detail", c.detail}});
  }
  doc["passed"] = passed;
  doc["checks"] = list;
  return doc.dump(2);
}

}  // namespace layerscope
