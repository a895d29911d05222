#pragma once

#include <cstddef>
#include <vector>

namespace riskcontract {

/// Finite-support loss distribution. Support values are strictly increasing
/// and nonnegative; probabilities are nonnegative and sum to one.
class DiscreteDistribution {
 public:
  static constexpr double prob_sum_tol = 1e-12;

  DiscreteDistribution(std::vector<double> support, std::vector<double> probs);

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return support_.size(); }

  /// Right-continuous step CDF, P(Z <= t).
  double cdf(double t) const noexcept;

  double expectation() const noexcept;

  double min_value() const noexcept { return support_.front(); }
  double max_value() const noexcept { return support_.back(); }

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
};

}  // namespace riskcontract
