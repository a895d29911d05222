#include "riskcontract/contract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace riskcontract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const ProblemSpec& spec) {
  if (!(spec.investment_cost > 0.0))
    throw std::invalid_argument("contract: investment cost must be positive");
  if (spec.grid_points < 3)
    throw std::invalid_argument("contract: grid needs at least 3 points");
}

std::vector<double> linspace(double lo, double hi, int k) {
  std::vector<double> xs(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (k - 1);
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

struct BestPoint {
  double x = 0;
  double value = kInf;
};

/// Strictly better value wins; ties go to the smaller action.
void consider(BestPoint& best, double x, double value) {
  if (value == kInf) return;
  if (value < best.value || (value == best.value && x < best.x)) best = {x, value};
}

template <typename F>
void golden_refine(F&& f, double a, double b, BestPoint& best, double xtol) {
  if (!(b > a)) return;
  constexpr double gr = 0.6180339887498949;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(best, c, fc);
  consider(best, d, fd);
  for (int it = 0; it < 200 && b - a > xtol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
      consider(best, c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
      consider(best, d, fd);
    }
  }
}

DerivativeOptions derivative_options(const ProblemSpec& spec) {
  return DerivativeOptions{spec.tol.derivative_step, spec.tol.kink_tol};
}

struct ReducedEval {
  double value = 0;
  CoverageResult cov;
  double risk_u = 0;
  double risk_i = 0;
};

std::optional<ReducedEval> reduced_eval(const ProblemSpec& spec, double x) {
  CoverageResult cov = feasible_coverage(spec, x);
  if (!cov.feasible) return std::nullopt;
  ReducedEval out;
  out.cov = cov;
  out.risk_u = evaluate(spec.user, spec.model.distribution_at(x));
  out.risk_i = evaluate(spec.insurer, spec.model.distribution_at(x));
  const double m = spec.investment_cost;
  const double gap = out.risk_i - out.risk_u;
  out.value = gap * (1.0 + m / cov.derivative.value) + out.risk_u + m * x;
  const double substituted = cov.c * out.risk_i + (1.0 - cov.c) * out.risk_u + m * x;
  if (std::abs(out.value - substituted) > 1e-9)
    throw std::logic_error("contract: eliminated and substituted objectives disagree");
  return out;
}

}  // namespace

const char* infeasibility_name(Infeasibility reason) {
  switch (reason) {
    case Infeasibility::FlatRisk:
      return "flat-risk";
    case Infeasibility::UnderSensitive:
      return "under-sensitive";
    case Infeasibility::NonPositivePremium:
      return "non-positive-premium";
  }
  return "unknown";
}

double user_objective(const ProblemSpec& spec, const Contract& contract, double x) {
  if (!(contract.coverage >= 0.0 && contract.coverage <= 1.0))
    throw std::invalid_argument("contract: coverage outside [0, 1]");
  const DiscreteDistribution dist = spec.model.distribution_at(x);
  const double risk = evaluate(spec.user, dist);
  const double m = spec.investment_cost;
  const double reduced = (1.0 - contract.coverage) * risk + m * x + contract.premium;

  std::vector<double> transformed(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    transformed[i] = (1.0 - contract.coverage) * dist.support()[i] + m * x + contract.premium;
  const double direct = evaluate(spec.user, transformed, dist.probs());
  if (std::abs(direct - reduced) > 1e-9)
    throw std::logic_error("contract: user objective reduction identity failed");
  return reduced;
}

double insurer_objective(const ProblemSpec& spec, const Contract& contract, double x) {
  if (!(contract.coverage >= 0.0 && contract.coverage <= 1.0))
    throw std::invalid_argument("contract: coverage outside [0, 1]");
  const DiscreteDistribution dist = spec.model.distribution_at(x);
  const double risk = evaluate(spec.insurer, dist);
  const double reduced = contract.coverage * risk - contract.premium;

  std::vector<double> transformed(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    transformed[i] = contract.coverage * dist.support()[i] - contract.premium;
  const double direct = evaluate(spec.insurer, transformed, dist.probs());
  if (std::abs(direct - reduced) > 1e-9)
    throw std::logic_error("contract: insurer objective reduction identity failed");
  return reduced;
}

BaselineResult solve_baseline(const ProblemSpec& spec) {
  validate(spec);
  const double lo = spec.model.action_low();
  const double hi = spec.model.action_high();
  auto f = [&](double x) {
    return evaluate(spec.user, spec.model.distribution_at(x)) + spec.investment_cost * x;
  };
  BestPoint best;
  for (double x : linspace(lo, hi, spec.grid_points)) consider(best, x, f(x));
  const double cell = (hi - lo) / (spec.grid_points - 1);
  golden_refine(f, std::max(lo, best.x - cell), std::min(hi, best.x + cell), best,
                1e-11 * (hi - lo));
  return BaselineResult{best.x, best.value};
}

CoverageResult coverage_from_derivative(double investment_cost, double derivative) {
  CoverageResult r;
  r.derivative.value = derivative;
  r.derivative.forward = derivative;
  r.derivative.backward = derivative;
  if (!(derivative < 0.0)) {
    r.reason = Infeasibility::FlatRisk;
    return r;
  }
  const double c = 1.0 + investment_cost / derivative;
  if (c < 0.0) {
    r.reason = Infeasibility::UnderSensitive;
    return r;
  }
  r.feasible = true;
  r.c = std::min(c, 1.0);
  return r;
}

CoverageResult feasible_coverage(const ProblemSpec& spec, double x) {
  const DerivativeEstimate est =
      risk_derivative_fd(spec.user, spec.model, x, derivative_options(spec));
  CoverageResult r = coverage_from_derivative(spec.investment_cost, est.value);
  r.derivative = est;
  return r;
}

PremiumResult feasible_premium(const ProblemSpec& spec, double x, double c,
                               const BaselineResult& baseline) {
  if (!(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("contract: coverage outside [0, 1]");
  const double risk = evaluate(spec.user, spec.model.distribution_at(x));
  const double m = spec.investment_cost;
  PremiumResult r;
  r.q = baseline.U_bar - m * x - (1.0 - c) * risk;
  r.q_alt_convention = baseline.U_bar - m * x - c * risk;
  r.reason = Infeasibility::NonPositivePremium;
  r.feasible = r.q > spec.tol.premium_floor;
  return r;
}

double reduced_objective(const ProblemSpec& spec, double x) {
  validate(spec);
  const auto r = reduced_eval(spec, x);
  if (!r) {
    const CoverageResult cov = feasible_coverage(spec, x);
    throw std::domain_error(std::string("contract: no feasible coverage at x=") +
                            std::to_string(x) + " (" + infeasibility_name(cov.reason) +
                            ")");
  }
  return r->value;
}

SolveReport solve_contract(const ProblemSpec& spec) {
  validate(spec);
  const BaselineResult baseline = solve_baseline(spec);
  const double lo = spec.model.action_low();
  const double hi = spec.model.action_high();
  const std::vector<double> grid = linspace(lo, hi, spec.grid_points);
  const double cell = (hi - lo) / (spec.grid_points - 1);

  auto value_at = [&](double x) -> double {
    const auto r = reduced_eval(spec, x);
    if (!r) return kInf;
    if (!feasible_premium(spec, x, r->cov.c, baseline).feasible) return kInf;
    return r->value;
  };

  BestPoint best;
  std::vector<std::pair<double, Infeasibility>> reasons;
  for (double x : grid) {
    const auto r = reduced_eval(spec, x);
    if (!r) {
      reasons.emplace_back(x, feasible_coverage(spec, x).reason);
      continue;
    }
    if (!feasible_premium(spec, x, r->cov.c, baseline).feasible) {
      reasons.emplace_back(x, Infeasibility::NonPositivePremium);
      continue;
    }
    consider(best, x, r->value);
  }
  if (best.value == kInf) {
    std::size_t flat = 0, under = 0, premium = 0;
    for (const auto& [x, why] : reasons) {
      if (why == Infeasibility::FlatRisk) ++flat;
      if (why == Infeasibility::UnderSensitive) ++under;
      if (why == Infeasibility::NonPositivePremium) ++premium;
    }
    throw NoContractError(
        "no feasible contract on the action grid (flat-risk: " + std::to_string(flat) +
            ", under-sensitive: " + std::to_string(under) +
            ", non-positive-premium: " + std::to_string(premium) + ")",
        std::move(reasons));
  }
  golden_refine(value_at, std::max(lo, best.x - cell), std::min(hi, best.x + cell), best,
                1e-11 * (hi - lo));

  SolveReport rep;
  rep.baseline = baseline;
  rep.x_star = best.x;
  const CoverageResult cov = feasible_coverage(spec, rep.x_star);
  const PremiumResult prem = feasible_premium(spec, rep.x_star, cov.c, baseline);
  rep.contract = Contract{cov.c, prem.q};
  rep.user_objective = user_objective(spec, rep.contract, rep.x_star);
  rep.insurer_objective = insurer_objective(spec, rep.contract, rep.x_star);
  rep.ir_gap = std::abs(rep.user_objective - baseline.U_bar);
  rep.stationarity_residual =
      std::abs((1.0 - cov.c) * cov.derivative.value + spec.investment_cost);
  rep.premium_alt_convention = prem.q_alt_convention;
  rep.conditions = check_theorem_conditions(spec, grid);
  rep.security_enhanced = rep.x_star >= baseline.x0 - cell;

  const double edge = 1e-12 * (hi - lo);
  if (cov.derivative.kink) rep.warnings.push_back("derivative_kink_at_solution");
  if (baseline.x0 - lo < edge || hi - baseline.x0 < edge)
    rep.warnings.push_back("baseline_on_action_boundary");
  if (rep.x_star - lo < edge || hi - rep.x_star < edge)
    rep.warnings.push_back("solution_on_action_boundary");
  bool fosd_ok = true;
  for (std::size_t i = 0; i + 1 < grid.size() && fosd_ok; ++i)
    fosd_ok = check_fosd(spec.model, grid[i], grid[i + 1], spec.tol.fosd_tol).pass;
  if (!fosd_ok) rep.warnings.push_back("fosd_violated_on_grid");
  const double h = spec.tol.derivative_step > 0 ? spec.tol.derivative_step
                                                : 1e-4 * (hi - lo);
  if (!check_density_convexity(spec.model, grid, h, spec.tol.convexity_tol).pass)
    rep.warnings.push_back("density_convexity_violated");
  return rep;
}

BruteForceReport brute_force_bilevel(const ProblemSpec& spec,
                                     const std::vector<double>& c_grid,
                                     const std::vector<double>& x_grid) {
  validate(spec);
  if (c_grid.empty() || x_grid.empty())
    throw std::invalid_argument("contract: oracle grids must be nonempty");
  const double m = spec.investment_cost;

  std::vector<double> risk_u(x_grid.size()), risk_i(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const DiscreteDistribution dist = spec.model.distribution_at(x_grid[i]);
    risk_u[i] = evaluate(spec.user, dist);
    risk_i[i] = evaluate(spec.insurer, dist);
  }

  BruteForceReport rep;
  rep.U_bar = kInf;
  for (std::size_t i = 0; i < x_grid.size(); ++i)
    rep.U_bar = std::min(rep.U_bar, risk_u[i] + m * x_grid[i]);

  double best_obj = kInf;
  for (double c : c_grid) {
    if (!(c >= 0.0 && c <= 1.0)) continue;
    std::size_t bi = 0;
    double bv = kInf;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      const double v = (1.0 - c) * risk_u[i] + m * x_grid[i];
      if (v < bv || (v == bv && x_grid[i] < x_grid[bi])) {
        bv = v;
        bi = i;
      }
    }
    const double q = rep.U_bar - m * x_grid[bi] - (1.0 - c) * risk_u[bi];
    if (!(q > spec.tol.premium_floor)) continue;
    ++rep.surviving_candidates;
    const double obj = c * risk_i[bi] + (1.0 - c) * risk_u[bi] + m * x_grid[bi] - rep.U_bar;
    if (obj < best_obj || (obj == best_obj && c < rep.c)) {
      best_obj = obj;
      rep.c = c;
      rep.x = x_grid[bi];
      rep.q = q;
    }
  }
  rep.found = rep.surviving_candidates > 0;
  rep.objective = rep.found ? best_obj : kInf;
  return rep;
}

TheoremConditions check_theorem_conditions(const ProblemSpec& spec,
                                           const std::vector<double>& x_grid) {
  if (x_grid.empty())
    throw std::invalid_argument("contract: condition grid must be nonempty");
  const DerivativeOptions opts = derivative_options(spec);
  TheoremConditions out;
  out.worst_c1_gap = -kInf;
  out.worst_c2_gap = -kInf;
  out.D_profile.reserve(x_grid.size());
  for (double x : x_grid) {
    const DiscreteDistribution dist = spec.model.distribution_at(x);
    const double ru = evaluate(spec.user, dist);
    const double ri = evaluate(spec.insurer, dist);
    out.D_profile.emplace_back(x, ri - ru);
    out.worst_c1_gap = std::max(out.worst_c1_gap, ru - ri);
    const double du = risk_derivative_fd(spec.user, spec.model, x, opts).value;
    const double di = risk_derivative_fd(spec.insurer, spec.model, x, opts).value;
    out.worst_c2_gap = std::max(out.worst_c2_gap, std::abs(du) - std::abs(di));
  }
  out.c1_holds = out.worst_c1_gap <= spec.tol.condition_tol;
  out.c2_holds = out.worst_c2_gap <= spec.tol.condition_tol;
  return out;
}

double compromise_objective(const ProblemSpec& spec, double c, double x) {
  if (!(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("contract: coverage outside [0, 1]");
  const RiskMeasureSpec blended = RiskMeasureSpec::mixture(c, spec.insurer, spec.user);
  return evaluate(blended, spec.model.distribution_at(x)) + spec.investment_cost * x;
}

nlohmann::json SolveReport::to_json() const {
  nlohmann::json j;
  j["x0"] = baseline.x0;
  j["U_bar"] = baseline.U_bar;
  j["x_star"] = x_star;
  j["c_star"] = contract.coverage;
  j["q_star"] = contract.premium;
  j["insurer_objective"] = insurer_objective;
  j["user_objective"] = user_objective;
  j["ir_gap"] = ir_gap;
  j["stationarity_residual"] = stationarity_residual;
  j["q_star_alt_convention"] = premium_alt_convention;
  j["c1_holds"] = conditions.c1_holds;
  j["c2_holds"] = conditions.c2_holds;
  j["security_enhanced"] = security_enhanced;
  j["D_profile"] = nlohmann::json::array();
  for (const auto& [x, d] : conditions.D_profile)
    j["D_profile"].push_back(nlohmann::json::array({x, d}));
  j["warnings"] = warnings;
  return j;
}

}  // namespace riskcontract
