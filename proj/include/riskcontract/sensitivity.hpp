#pragma once

#include "riskcontract/loss_model.hpp"
#include "riskcontract/risk_measure.hpp"

namespace riskcontract {

struct DerivativeOptions {
  /// Step size; nonpositive means 1e-4 * (action_high - action_low).
  double step = 0;
  /// One-sided estimates differing by more than 10 * kink_tol flag a kink.
  double kink_tol = 1e-2;
};

struct DerivativeEstimate {
  double value = 0;
  double forward = 0;
  double backward = 0;
  bool kink = false;
  bool at_boundary = false;
};

/// d/dx rho[xi | x] by central differences, with second-order one-sided
/// stencils at the ends of the action interval.
DerivativeEstimate risk_derivative_fd(const RiskMeasureSpec& spec,
                                      const ParameterizedLossModel& model, double x,
                                      const DerivativeOptions& opts = {});

/// The same sensitivity for AV@R through its dual solution: with the
/// maximizing density zeta* and quantile t* held fixed at x, the derivative
/// is sum_i zeta*_i (z_i - t*) dp_i/dx. Holding t* (not just zeta*) fixed is
/// what keeps the moving normalization constraint of the dual feasible set
/// out of the estimate. Flags a kink when the dual maximizer is not unique.
DerivativeEstimate risk_derivative_dual(const ParameterizedLossModel& model, double x,
                                        double avar_level,
                                        const DerivativeOptions& opts = {});

/// d^2/dx^2 rho[xi | x] by second differences (one-sided at the interval ends).
double risk_second_derivative_fd(const RiskMeasureSpec& spec,
                                 const ParameterizedLossModel& model, double x,
                                 const DerivativeOptions& opts = {});

}  // namespace riskcontract
