#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "riskcontract/contract.hpp"

namespace riskcontract {

/// Action at which the coverage sweep evaluates each level: the per-level
/// no-insurance optimum, or one externally fixed action.
enum class SweepMode { AtBaseline, FixedX };

const char* sweep_mode_name(SweepMode mode);
SweepMode parse_sweep_mode(const std::string& name);

/// Ransomware scenario: n machines, lock probability 1 - kappa x^2, user
/// perceiving risk through AV@R at the swept levels.
struct CaseStudyConfig {
  int n = 10;
  double kappa = 0.8;
  double m = 2.0;
  std::vector<double> user_avar_levels;
  RiskMeasureSpec insurer = RiskMeasureSpec::avar(0.95);
  SweepMode mode = SweepMode::AtBaseline;
  double fixed_x = 0.5;
  std::vector<double> x_grid;
  int grid_points = 201;
  Tolerances tol;
};

ParameterizedLossModel case_study_model(const CaseStudyConfig& config);
ProblemSpec case_study_problem(const CaseStudyConfig& config, double user_level);

struct CoverageSweepRow {
  double level = 0;
  double x = 0;
  double c = 0;  // NaN when infeasible
  bool feasible = false;
  std::string reason;
};

struct PremiumSweepRow {
  double x = 0;
  double c = 0;  // NaN when coverage is infeasible
  double q = 0;  // NaN when infeasible
  bool feasible = false;
  std::string reason;
};

struct CoverageSweepTable {
  SweepMode mode = SweepMode::AtBaseline;
  double fixed_x = 0;
  std::vector<CoverageSweepRow> rows;
};

struct PremiumSweepTable {
  double level = 0;  // the single user AV@R level behind the sweep
  double x0 = 0;
  double U_bar = 0;
  std::vector<PremiumSweepRow> rows;
};

/// One row per AV@R level: how the feasible coverage moves as the user grows
/// more risk-averse.
CoverageSweepTable run_coverage_vs_avar_level(const CaseStudyConfig& config);

/// One row per action: coverage and binding-participation premium against the
/// fixed-level baseline.
PremiumSweepTable run_premium_vs_investment(const CaseStudyConfig& config);

struct SegmentReport {
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // inclusive index ranges
  std::vector<std::size_t> breakpoints;  // index that starts each new segment
  std::size_t violations = 0;

  nlohmann::json to_json() const;
};

/// Maximal nondecreasing runs of a sweep column; a new run starts wherever
/// the value drops by more than tol. Breakpoints are candidate locations of
/// dual-optimizer jumps.
SegmentReport monotone_segments(std::span<const double> column, double tol = 1e-9);

void write_coverage_csv(const CoverageSweepTable& table, const std::filesystem::path& file);
void write_premium_csv(const PremiumSweepTable& table, const std::filesystem::path& file);

}  // namespace riskcontract
