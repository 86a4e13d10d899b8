#pragma once

// Self-check suites run by `layerscope validate`.

#include <string>
#include <vector>

namespace layerscope {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // limit it is compared against
  std::string detail;
};

/// Suites: coefficients, solver, asymptotics, all. Throws
/// std::invalid_argument for an unknown name.
std::vector<CheckResult> run_validation(const std::string& suite);

/// {"suite", "passed", "checks": [...]} as JSON text.
std::string validation_report(const std::string& suite, const std::vector<CheckResult>& checks);

}  // namespace layerscope
