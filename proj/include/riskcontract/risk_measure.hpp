#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "riskcontract/distribution.hpp"

namespace riskcontract {

/// Declarative description of a coherent, law-invariant risk measure:
/// expectation, average value-at-risk, absolute semideviation, or a convex
/// mixture of two such measures.
class RiskMeasureSpec {
 public:
  enum class Kind { Expectation, AVaR, Semideviation, Mixture };
  static constexpr int max_mixture_depth = 8;

  static RiskMeasureSpec expectation();
  /// AV@R at level a in [0, 1): expected loss in the worst (1-a) tail.
  static RiskMeasureSpec avar(double level);
  /// E[Z] + theta * E[(Z - E[Z])_+] with theta in [0, 1].
  static RiskMeasureSpec semideviation(double theta);
  /// weight * left + (1 - weight) * right with weight in [0, 1].
  static RiskMeasureSpec mixture(double weight, RiskMeasureSpec left,
                                 RiskMeasureSpec right);

  Kind kind() const noexcept { return kind_; }
  double level() const;
  double theta() const;
  double weight() const;
  const RiskMeasureSpec& left() const;
  const RiskMeasureSpec& right() const;

  int depth() const noexcept;
  std::string describe() const;

 private:
  RiskMeasureSpec(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_ = 0;
  std::shared_ptr<const RiskMeasureSpec> left_;
  std::shared_ptr<const RiskMeasureSpec> right_;
};

/// Risk of a loss described by parallel (value, probability) arrays on a
/// common finite sample space. Values may repeat, appear in any order, and
/// take either sign; only the induced distribution matters, and evaluation is
/// bit-stable under permutations of the input.
double evaluate(const RiskMeasureSpec& spec, std::span<const double> values,
                std::span<const double> probs);

double evaluate(const RiskMeasureSpec& spec, const DiscreteDistribution& dist);

/// Change of measure relative to the distribution it was computed from.
struct DualDensity {
  std::vector<double> weights;  // aligned with the distribution's support
};

struct AvarDualSolution {
  double value = 0;
  DualDensity density;
  /// Loss value of the atom where the tail budget runs out (the a-quantile).
  double var = 0;
  /// Fraction of that atom's mass inside the tail, in (0, 1]. A fraction of
  /// exactly 1 means the budget ends on an atom boundary and the maximizing
  /// density is not unique.
  double boundary_fraction = 0;
};

/// AV@R through its dual representation: maximize the reweighted expectation
/// over densities bounded by 1/(1-a), filled greedily from the largest loss
/// downward. Independent route from the quantile-based evaluation.
AvarDualSolution dual_evaluate_avar(const DiscreteDistribution& dist, double level);

}  // namespace riskcontract
