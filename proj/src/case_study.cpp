#include "riskcontract/case_study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace riskcontract {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate(const CaseStudyConfig& config) {
  if (config.n < 1) throw std::invalid_argument("case study: need at least one machine");
  if (!(config.kappa > 0.0 && config.kappa <= 1.0))
    throw std::invalid_argument("case study: kappa must lie in (0, 1]");
  if (!(config.m > 0.0))
    throw std::invalid_argument("case study: investment cost must be positive");
}

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("case study: cannot write " + file.string());
  return out;
}

}  // namespace

const char* sweep_mode_name(SweepMode mode) {
  return mode == SweepMode::AtBaseline ? "at-baseline" : "fixed-x";
}

SweepMode parse_sweep_mode(const std::string& name) {
  if (name == "at-baseline") return SweepMode::AtBaseline;
  if (name == "fixed-x") return SweepMode::FixedX;
  throw std::invalid_argument("case study: unknown sweep mode '" + name + "'");
}

ParameterizedLossModel case_study_model(const CaseStudyConfig& config) {
  validate(config);
  return ParameterizedLossModel(0.0, 1.0, BinomialRansomware{config.n, config.kappa});
}

ProblemSpec case_study_problem(const CaseStudyConfig& config, double user_level) {
  return ProblemSpec{config.insurer,
                     RiskMeasureSpec::avar(user_level),
                     case_study_model(config),
                     config.m,
                     config.grid_points,
                     config.tol};
}

CoverageSweepTable run_coverage_vs_avar_level(const CaseStudyConfig& config) {
  validate(config);
  CoverageSweepTable table;
  table.mode = config.mode;
  table.fixed_x = config.fixed_x;
  if (config.mode == SweepMode::FixedX &&
      !(config.fixed_x >= 0.0 && config.fixed_x <= 1.0))
    throw std::invalid_argument("case study: fixed action outside [0, 1]");
  for (double level : config.user_avar_levels) {
    const ProblemSpec problem = case_study_problem(config, level);
    const double x_used = config.mode == SweepMode::AtBaseline
                              ? solve_baseline(problem).x0
                              : config.fixed_x;
    const CoverageResult cov = feasible_coverage(problem, x_used);
    CoverageSweepRow row;
    row.level = level;
    row.x = x_used;
    row.feasible = cov.feasible;
    row.c = cov.feasible ? cov.c : kNan;
    if (!cov.feasible) row.reason = infeasibility_name(cov.reason);
    table.rows.push_back(std::move(row));
  }
  return table;
}

PremiumSweepTable run_premium_vs_investment(const CaseStudyConfig& config) {
  validate(config);
  if (config.user_avar_levels.size() != 1)
    throw std::invalid_argument("case study: premium sweep needs exactly one user level");
  const ProblemSpec problem = case_study_problem(config, config.user_avar_levels.front());
  const BaselineResult baseline = solve_baseline(problem);

  PremiumSweepTable table;
  table.level = config.user_avar_levels.front();
  table.x0 = baseline.x0;
  table.U_bar = baseline.U_bar;
  for (double x : config.x_grid) {
    if (!problem.model.contains(x))
      throw std::invalid_argument("case study: sweep action outside [0, 1]");
    PremiumSweepRow row;
    row.x = x;
    const CoverageResult cov = feasible_coverage(problem, x);
    if (!cov.feasible) {
      row.c = kNan;
      row.q = kNan;
      row.reason = infeasibility_name(cov.reason);
      table.rows.push_back(std::move(row));
      continue;
    }
    row.c = cov.c;
    const PremiumResult prem = feasible_premium(problem, x, cov.c, baseline);
    row.feasible = prem.feasible;
    row.q = prem.feasible ? prem.q : kNan;
    if (!prem.feasible) row.reason = infeasibility_name(prem.reason);
    table.rows.push_back(std::move(row));
  }
  return table;
}

SegmentReport monotone_segments(std::span<const double> column, double tol) {
  if (column.size() < 2)
    throw std::invalid_argument("case study: segment analysis needs at least 2 values");
  SegmentReport rep;
  std::size_t start = 0;
  for (std::size_t i = 1; i < column.size(); ++i) {
    if (column[i] < column[i - 1] - tol) {
      rep.segments.emplace_back(start, i - 1);
      rep.breakpoints.push_back(i);
      start = i;
    }
  }
  rep.segments.emplace_back(start, column.size() - 1);
  rep.violations = rep.breakpoints.size();
  return rep;
}

nlohmann::json SegmentReport::to_json() const {
  nlohmann::json j;
  j["count"] = segments.size();
  j["segments"] = nlohmann::json::array();
  for (const auto& [s, e] : segments) j["segments"].push_back({s, e});
  j["breakpoints"] = breakpoints;
  j["violations"] = violations;
  return j;
}

void write_coverage_csv(const CoverageSweepTable& table, const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "a,x,c,feasible\n";
  for (const auto& row : table.rows)
    out << fmt9(row.level) << ',' << fmt9(row.x) << ',' << fmt9(row.c) << ','
        << (row.feasible ? 1 : 0) << '\n';
}

void write_premium_csv(const PremiumSweepTable& table, const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "x,c,q,feasible\n";
  for (const auto& row : table.rows)
    out << fmt9(row.x) << ',' << fmt9(row.c) << ',' << fmt9(row.q) << ','
        << (row.feasible ? 1 : 0) << '\n';
}

}  // namespace riskcontract
