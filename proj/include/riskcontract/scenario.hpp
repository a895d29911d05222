#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskcontract/case_study.hpp"
#include "riskcontract/contract.hpp"

namespace riskcontract {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fully parsed scenario config: the contract problem plus the sweep and
/// output settings that ride along with it.
struct Scenario {
  ProblemSpec problem;
  bool binomial = false;  // sweeps require the ransomware family
  int n = 0;
  double kappa = 0;
  std::vector<double> avar_levels;
  std::vector<double> sweep_x;
  SweepMode mode = SweepMode::AtBaseline;
  double fixed_x = 0.5;
  std::filesystem::path out_dir = ".";
  std::string prefix;
  nlohmann::json echo;  // config as given, for report sidecars
};

/// Measure object: {"kind": "expectation" | "avar" | "semideviation" |
/// "mixture", ...parameters...}. Unknown keys are rejected.
RiskMeasureSpec parse_measure(const nlohmann::json& j, const std::string& context);

/// Sections: model, insurer, user, costs (required); grids, tolerances,
/// output (optional). Unknown keys anywhere are a ConfigError. Relative CSV
/// paths resolve against base_dir.
Scenario parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir);

Scenario load_scenario(const std::filesystem::path& file);

}  // namespace riskcontract
