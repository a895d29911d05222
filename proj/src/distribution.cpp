#include "riskcontract/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace riskcontract {

DiscreteDistribution::DiscreteDistribution(std::vector<double> support,
                                           std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) throw std::invalid_argument("distribution: empty support");
  if (support_.size() != probs_.size())
    throw std::invalid_argument("distribution: support/probability size mismatch");
  if (!(support_.front() >= 0.0))
    throw std::invalid_argument("distribution: support values must be nonnegative");
  for (std::size_t i = 1; i < support_.size(); ++i)
    if (!(support_[i] > support_[i - 1]))
      throw std::invalid_argument("distribution: support must be strictly increasing");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("distribution: probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > prob_sum_tol)
    throw std::invalid_argument("distribution: probabilities sum to " +
                                std::to_string(sum) + ", expected 1");
}

double DiscreteDistribution::cdf(double t) const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < support_.size() && support_[i] <= t; ++i) acc += probs_[i];
  return acc;
}

double DiscreteDistribution::expectation() const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) acc += support_[i] * probs_[i];
  return acc;
}

}  // namespace riskcontract
