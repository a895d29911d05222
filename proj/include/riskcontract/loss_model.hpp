#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include "riskcontract/distribution.hpp"

namespace riskcontract {

/// Ransomware loss family: out of n machines each one is locked independently
/// with probability 1 - damping * x^2, where x is the protection investment.
/// The loss is the number of locked machines.
struct BinomialRansomware {
  int n = 10;
  double damping = 0.8;
};

/// Loss family tabulated on an action grid over a shared support. Between
/// grid actions the pmf entries are interpolated linearly and renormalized;
/// outside the grid the nearest row is used.
struct TabulatedFamily {
  std::vector<double> actions;
  std::vector<double> support;
  std::vector<std::vector<double>> pmf;  // one row per action
};

/// A family of loss distributions indexed by an action x in
/// [action_low, action_high], all sharing one support.
class ParameterizedLossModel {
 public:
  ParameterizedLossModel(double action_low, double action_high, BinomialRansomware family);
  ParameterizedLossModel(double action_low, double action_high, TabulatedFamily family);

  /// CSV layout: header "x,<support values...>", then one "action,pmf..." row
  /// per tabulated action, actions ascending.
  static ParameterizedLossModel from_csv(const std::filesystem::path& file,
                                         double action_low, double action_high);

  double action_low() const noexcept { return action_low_; }
  double action_high() const noexcept { return action_high_; }
  bool contains(double x) const noexcept {
    return x >= action_low_ && x <= action_high_;
  }

  const std::vector<double>& support() const noexcept { return support_; }

  DiscreteDistribution distribution_at(double x) const;
  std::vector<double> pmf_at(double x) const;

 private:
  double action_low_;
  double action_high_;
  std::variant<BinomialRansomware, TabulatedFamily> family_;
  std::vector<double> support_;
};

/// First-order stochastic dominance between two actions: passes when the CDF
/// at the higher action dominates the CDF at the lower one pointwise, i.e.
/// spending more never shifts mass toward larger losses.
struct FosdReport {
  double x1 = 0;
  double x2 = 0;
  bool pass = false;
  double worst_gap = 0;    // max over support of F(., x1) - F(., x2)
  double worst_point = 0;  // support point attaining worst_gap
};

FosdReport check_fosd(const ParameterizedLossModel& model, double x1, double x2,
                      double tol = 1e-9);

/// Convexity of each pmf entry in the action, probed by second central
/// differences on a grid. Grid points without x +- h inside the action
/// interval are skipped.
struct ConvexityReport {
  std::vector<double> x_points;
  std::vector<std::vector<double>> second_differences;  // [x index][support index]
  double min_value = 0;
  double min_x = 0;
  double min_support_point = 0;
  bool pass = false;
};

ConvexityReport check_density_convexity(const ParameterizedLossModel& model,
                                        const std::vector<double>& x_grid, double h,
                                        double tol = 1e-9);

}  // namespace riskcontract
