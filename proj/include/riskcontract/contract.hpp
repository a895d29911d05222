#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "riskcontract/loss_model.hpp"
#include "riskcontract/risk_measure.hpp"
#include "riskcontract/sensitivity.hpp"

namespace riskcontract {

/// Insurance contract: the insurer pays coverage * loss and collects the
/// premium up front.
struct Contract {
  double coverage = 0;  // in [0, 1]
  double premium = 0;   // > 0
};

struct Tolerances {
  double ir_tol = 1e-6;            // binding participation residual
  double stationarity_tol = 1e-4;  // incentive first-order residual
  double premium_floor = 1e-12;    // q must exceed this to count as positive
  double condition_tol = 1e-6;     // slack when checking the theorem conditions
  double fosd_tol = 1e-9;
  double convexity_tol = 1e-9;
  double derivative_step = 0;      // 0 = sensitivity default
  double kink_tol = 1e-2;
};

/// Full description of one contract-design problem.
struct ProblemSpec {
  RiskMeasureSpec insurer;
  RiskMeasureSpec user;
  ParameterizedLossModel model;
  double investment_cost = 0;  // m, cost per unit of protective investment
  int grid_points = 201;
  Tolerances tol;
};

/// No-insurance benchmark: the action the user would take alone and the risk
/// level U_bar they achieve, which any contract must match.
struct BaselineResult {
  double x0 = 0;
  double U_bar = 0;
};

enum class Infeasibility {
  FlatRisk,           // risk not decreasing in x, coverage map undefined
  UnderSensitive,     // |d rho/dx| < m, coverage would be negative
  NonPositivePremium  // binding participation gives q <= 0
};

const char* infeasibility_name(Infeasibility reason);

struct CoverageResult {
  bool feasible = false;
  double c = 0;
  Infeasibility reason = Infeasibility::FlatRisk;
  DerivativeEstimate derivative;
};

struct PremiumResult {
  bool feasible = false;
  double q = 0;
  /// Premium under the alternative convention that charges c (rather than
  /// 1 - c) times the retained risk; emitted for transparency only.
  double q_alt_convention = 0;
  Infeasibility reason = Infeasibility::NonPositivePremium;
};

struct TheoremConditions {
  bool c1_holds = false;  // insurer at least as risk-averse on every grid action
  bool c2_holds = false;  // insurer's risk at least as sensitive on every grid action
  std::vector<std::pair<double, double>> D_profile;  // (x, rho_i - rho_u)
  double worst_c1_gap = 0;  // max over grid of rho_u - rho_i
  double worst_c2_gap = 0;  // max over grid of |d rho_u| - |d rho_i|
};

struct SolveReport {
  BaselineResult baseline;
  double x_star = 0;
  Contract contract;
  double insurer_objective = 0;
  double user_objective = 0;
  double ir_gap = 0;
  double stationarity_residual = 0;
  double premium_alt_convention = 0;
  TheoremConditions conditions;
  bool security_enhanced = false;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

class NoContractError : public std::runtime_error {
 public:
  NoContractError(std::string message, std::vector<std::pair<double, Infeasibility>> reasons)
      : std::runtime_error(std::move(message)), reasons_(std::move(reasons)) {}

  const std::vector<std::pair<double, Infeasibility>>& reasons() const noexcept {
    return reasons_;
  }

 private:
  std::vector<std::pair<double, Infeasibility>> reasons_;
};

/// (1-c) rho_u[xi|x] + m x + q; verified against rho_u evaluated directly on
/// the transformed loss (1-c) xi + m x + q.
double user_objective(const ProblemSpec& spec, const Contract& contract, double x);

/// c rho_i[xi|x] - q; verified against rho_i of c xi - q.
double insurer_objective(const ProblemSpec& spec, const Contract& contract, double x);

/// Minimizes rho_u[xi|x] + m x by grid scan plus golden-section refinement.
BaselineResult solve_baseline(const ProblemSpec& spec);

/// Coverage forced by user stationarity at x, as a function of the risk
/// sensitivity d = d rho_u / dx: c = 1 + m / d.
CoverageResult coverage_from_derivative(double investment_cost, double derivative);

CoverageResult feasible_coverage(const ProblemSpec& spec, double x);

/// Premium that makes participation bind at (x, c):
/// q = U_bar - m x - (1-c) rho_u[xi|x].
PremiumResult feasible_premium(const ProblemSpec& spec, double x, double c,
                               const BaselineResult& baseline);

/// Insurer's objective after eliminating c and q:
/// (rho_i - rho_u)(1 + m/d) + rho_u + m x; cross-checked against the
/// substituted form c rho_i + (1-c) rho_u + m x. Throws std::domain_error
/// when x admits no feasible coverage.
double reduced_objective(const ProblemSpec& spec, double x);

/// Grid scan plus golden-section refinement of reduced_objective over the
/// feasible actions. Throws NoContractError with per-action reasons when no
/// action is feasible.
SolveReport solve_contract(const ProblemSpec& spec);

struct BruteForceReport {
  bool found = false;
  double c = 0;
  double x = 0;
  double q = 0;
  double objective = 0;  // c rho_i + (1-c) rho_u + m x - U_bar at the optimum
  double U_bar = 0;      // reservation value recomputed on x_grid
  std::size_t surviving_candidates = 0;
};

/// Exhaustive bilevel oracle: for each c the user's best response on x_grid
/// (ties to the smallest x), premium from binding participation, candidates
/// with q <= 0 dropped, then the best c. Independent of the reduced solver.
BruteForceReport brute_force_bilevel(const ProblemSpec& spec,
                                     const std::vector<double>& c_grid,
                                     const std::vector<double>& x_grid);

TheoremConditions check_theorem_conditions(const ProblemSpec& spec,
                                           const std::vector<double>& x_grid);

/// c rho_i + (1-c) rho_u + m x evaluated through an explicit mixture measure.
double compromise_objective(const ProblemSpec& spec, double c, double x);

}  // namespace riskcontract
