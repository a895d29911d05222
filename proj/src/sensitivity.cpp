#include "riskcontract/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

namespace riskcontract {

namespace {

double effective_step(const ParameterizedLossModel& model, const DerivativeOptions& opts) {
  const double h =
      opts.step > 0 ? opts.step : 1e-4 * (model.action_high() - model.action_low());
  if (!(h > 0) || 3.0 * h > model.action_high() - model.action_low())
    throw std::invalid_argument("sensitivity: step does not fit the action interval");
  return h;
}

void require_inside(const ParameterizedLossModel& model, double x) {
  if (!model.contains(x))
    throw std::domain_error("sensitivity: action outside the model interval");
}

template <typename F>
DerivativeEstimate first_derivative(const ParameterizedLossModel& model, double x,
                                    const DerivativeOptions& opts, F&& f) {
  const double h = effective_step(model, opts);
  DerivativeEstimate est;
  if (x - h < model.action_low()) {
    est.value = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
    est.forward = est.backward = est.value;
    est.at_boundary = true;
  } else if (x + h > model.action_high()) {
    est.value = (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
    est.forward = est.backward = est.value;
    est.at_boundary = true;
  } else {
    const double fm = f(x - h), f0 = f(x), fp = f(x + h);
    est.value = (fp - fm) / (2.0 * h);
    est.forward = (fp - f0) / h;
    est.backward = (f0 - fm) / h;
    est.kink = std::abs(est.forward - est.backward) > 10.0 * opts.kink_tol;
  }
  return est;
}

}  // namespace

DerivativeEstimate risk_derivative_fd(const RiskMeasureSpec& spec,
                                      const ParameterizedLossModel& model, double x,
                                      const DerivativeOptions& opts) {
  require_inside(model, x);
  return first_derivative(model, x, opts, [&](double xx) {
    return evaluate(spec, model.distribution_at(xx));
  });
}

DerivativeEstimate risk_derivative_dual(const ParameterizedLossModel& model, double x,
                                        double avar_level, const DerivativeOptions& opts) {
  require_inside(model, x);
  const AvarDualSolution sol = dual_evaluate_avar(model.distribution_at(x), avar_level);
  const auto& z = model.support();
  const auto& zeta = sol.density.weights;
  const auto probs_at = [&](double xx) { return model.pmf_at(xx); };

  // Directional derivative of the reweighted tail with the maximizer frozen.
  auto assemble = [&](const std::vector<double>& dp) {
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) acc += zeta[i] * (z[i] - sol.var) * dp[i];
    return acc;
  };

  const double h = effective_step(model, opts);
  DerivativeEstimate est;
  const auto diff = [&](const std::vector<double>& a, const std::vector<double>& b,
                        double scale) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = (a[i] - b[i]) * scale;
    return d;
  };
  if (x - h < model.action_low()) {
    const auto p0 = probs_at(x), p1 = probs_at(x + h), p2 = probs_at(x + 2.0 * h);
    std::vector<double> dp(p0.size());
    for (std::size_t i = 0; i < dp.size(); ++i)
      dp[i] = (-3.0 * p0[i] + 4.0 * p1[i] - p2[i]) / (2.0 * h);
    est.value = est.forward = est.backward = assemble(dp);
    est.at_boundary = true;
  } else if (x + h > model.action_high()) {
    const auto p0 = probs_at(x), p1 = probs_at(x - h), p2 = probs_at(x - 2.0 * h);
    std::vector<double> dp(p0.size());
    for (std::size_t i = 0; i < dp.size(); ++i)
      dp[i] = (3.0 * p0[i] - 4.0 * p1[i] + p2[i]) / (2.0 * h);
    est.value = est.forward = est.backward = assemble(dp);
    est.at_boundary = true;
  } else {
    const auto pm = probs_at(x - h), p0 = probs_at(x), pp = probs_at(x + h);
    est.value = assemble(diff(pp, pm, 0.5 / h));
    est.forward = assemble(diff(pp, p0, 1.0 / h));
    est.backward = assemble(diff(p0, pm, 1.0 / h));
    est.kink = std::abs(est.forward - est.backward) > 10.0 * opts.kink_tol;
  }
  if (sol.boundary_fraction > 1.0 - 1e-9) est.kink = true;
  return est;
}

double risk_second_derivative_fd(const RiskMeasureSpec& spec,
                                 const ParameterizedLossModel& model, double x,
                                 const DerivativeOptions& opts) {
  require_inside(model, x);
  const double h = effective_step(model, opts);
  auto f = [&](double xx) { return evaluate(spec, model.distribution_at(xx)); };
  if (x - h < model.action_low())
    return (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2.0 * h) - f(x + 3.0 * h)) / (h * h);
  if (x + h > model.action_high())
    return (2.0 * f(x) - 5.0 * f(x - h) + 4.0 * f(x - 2.0 * h) - f(x - 3.0 * h)) / (h * h);
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace riskcontract
