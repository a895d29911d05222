#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskcontract/loss_model.hpp"
#include "riskcontract/risk_measure.hpp"

namespace riskcontract {

/// One randomized draw for the axiom harness: a common finite sample space
/// with two loss vectors aligned to it.
struct AxiomSample {
  std::vector<double> probs;
  std::vector<double> loss_a;
  std::vector<double> loss_b;
};

using AxiomSampler = std::function<AxiomSample(std::mt19937_64&)>;

/// 2 to 12 outcomes, strictly positive probabilities, losses in [-20, 50].
AxiomSample default_axiom_sample(std::mt19937_64& rng);

struct AxiomCheck {
  std::string name;
  double max_violation = 0;
  bool pass = false;
};

/// Result of the randomized coherence suite: monotonicity, convexity,
/// translation equivariance, positive homogeneity, and the risk-aversion
/// bound rho >= E.
struct AxiomReport {
  std::uint64_t seed = 0;
  int trials = 0;
  double tolerance = 0;
  std::vector<AxiomCheck> checks;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

AxiomReport check_axioms(const RiskMeasureSpec& spec, int trials, double tol = 1e-9,
                         std::uint64_t seed = 1729,
                         const AxiomSampler& sampler = AxiomSampler());

/// Risk values along an action grid must not increase between actions whose
/// distributions are ordered by first-order stochastic dominance. Pairs where
/// dominance itself fails are recorded and skipped.
struct DominanceConsistencyReport {
  std::vector<double> x_grid;
  std::vector<double> risk_values;
  bool fosd_all_pass = false;
  std::vector<std::size_t> fosd_failed_pairs;  // i refers to the pair (x_i, x_{i+1})
  double worst_increase = 0;
  bool monotone_pass = false;

  nlohmann::json to_json() const;
};

DominanceConsistencyReport check_dominance_consistency(const RiskMeasureSpec& spec,
                                                       const ParameterizedLossModel& model,
                                                       const std::vector<double>& x_grid,
                                                       double tol = 1e-9);

}  // namespace riskcontract
