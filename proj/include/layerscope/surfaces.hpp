#pragma once

// Catalog of locally rough interface profiles x2 = h(x1), with h compactly
// supported in [-s, s].

#include <map>
#include <string>

#include "layerscope/layered_core.hpp"

namespace layerscope {

enum class ProfileKind { Example1, Example2, Example3, Example4, Flat, ScaledBump };

struct ProfileSample {
  double h = 0.0;
  double h_prime = 0.0;
};

enum class Side { Above, Below, On };

class SurfaceProfile {
 public:
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] ProfileKind kind() const { return kind_; }
  [[nodiscard]] const std::map<std::string, double>& params() const { return params_; }
  /// h vanishes identically for |x1| >= support_halfwidth().
  [[nodiscard]] double support_halfwidth() const { return support_; }
  [[nodiscard]] double amplitude_bound() const { return amplitude_bound_; }

  [[nodiscard]] ProfileSample evaluate(double x1) const;
  [[nodiscard]] double height(double x1) const { return evaluate(x1).h; }

  /// Sign of p.x2 - h(p.x1); |difference| <= on_tolerance counts as On.
  [[nodiscard]] Side classify(const Point& p, double on_tolerance = 0.0) const;

  /// Even profiles satisfy h(-x1) = h(x1) by construction.
  [[nodiscard]] bool is_even() const;

  friend SurfaceProfile make_profile(const std::string&, const std::map<std::string, double>&);

 private:
  SurfaceProfile() = default;

  std::string name_;
  ProfileKind kind_ = ProfileKind::Flat;
  std::map<std::string, double> params_;
  double support_ = 0.0;
  double amplitude_ = 0.0;
  double amplitude_bound_ = 0.0;
};

/// Names: example1..example4, flat, scaled_bump (params: amplitude,
/// support_halfwidth). Throws std::invalid_argument on unknown names or
/// parameters.
SurfaceProfile make_profile(const std::string& name,
                            const std::map<std::string, double>& params = {});

}  // namespace layerscope
