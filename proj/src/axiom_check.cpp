#include "riskcontract/axiom_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcontract {

namespace {

constexpr const char* kAxiomNames[] = {
    "monotonicity", "convexity", "translation_equivariance", "positive_homogeneity",
    "risk_aversion",
};

}  // namespace

AxiomSample default_axiom_sample(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size_dist(2, 12);
  std::uniform_real_distribution<double> prob_dist(0.05, 1.0);
  std::uniform_real_distribution<double> loss_dist(-20.0, 50.0);

  AxiomSample s;
  const std::size_t k = size_dist(rng);
  s.probs.resize(k);
  s.loss_a.resize(k);
  s.loss_b.resize(k);
  double sum = 0.0;
  for (double& p : s.probs) {
    p = prob_dist(rng);
    sum += p;
  }
  for (double& p : s.probs) p /= sum;
  for (double& z : s.loss_a) z = loss_dist(rng);
  for (double& z : s.loss_b) z = loss_dist(rng);
  return s;
}

bool AxiomReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AxiomCheck& c) { return c.pass; });
}

nlohmann::json AxiomReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["trials"] = trials;
  j["tolerance"] = tolerance;
  j["all_pass"] = all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back(
        {{"name", c.name}, {"max_violation", c.max_violation}, {"pass", c.pass}});
  return j;
}

AxiomReport check_axioms(const RiskMeasureSpec& spec, int trials, double tol,
                         std::uint64_t seed, const AxiomSampler& sampler) {
  if (trials < 1) throw std::invalid_argument("axiom check: need at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mix_dist(0.0, 1.0);
  std::uniform_real_distribution<double> shift_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> scale_dist(0.0, 5.0);

  double worst[5] = {-1e300, -1e300, -1e300, -1e300, -1e300};
  for (int trial = 0; trial < trials; ++trial) {
    const AxiomSample s = sampler ? sampler(rng) : default_axiom_sample(rng);
    const double t = mix_dist(rng);
    const double shift = shift_dist(rng);
    const double scale = scale_dist(rng);
    const std::size_t k = s.probs.size();

    auto rho = [&](const std::vector<double>& z) {
      return evaluate(spec, std::span<const double>(z), std::span<const double>(s.probs));
    };

    std::vector<double> lo(k), hi(k), mix(k), shifted(k), scaled(k);
    double mean_a = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      lo[i] = std::min(s.loss_a[i], s.loss_b[i]);
      hi[i] = std::max(s.loss_a[i], s.loss_b[i]);
      mix[i] = t * s.loss_a[i] + (1.0 - t) * s.loss_b[i];
      shifted[i] = s.loss_a[i] + shift;
      scaled[i] = scale * s.loss_a[i];
      mean_a += s.loss_a[i] * s.probs[i];
    }

    const double rho_a = rho(s.loss_a);
    const double rho_b = rho(s.loss_b);
    worst[0] = std::max(worst[0], rho(lo) - rho(hi));
    worst[1] = std::max(worst[1], rho(mix) - (t * rho_a + (1.0 - t) * rho_b));
    worst[2] = std::max(worst[2], std::abs(rho(shifted) - (rho_a + shift)));
    worst[3] = std::max(worst[3], std::abs(rho(scaled) - scale * rho_a));
    worst[4] = std::max(worst[4], mean_a - rho_a);
  }

  AxiomReport rep;
  rep.seed = seed;
  rep.trials = trials;
  rep.tolerance = tol;
  for (int i = 0; i < 5; ++i)
    rep.checks.push_back({kAxiomNames[i], worst[i], worst[i] <= tol});
  return rep;
}

nlohmann::json DominanceConsistencyReport::to_json() const {
  nlohmann::json j;
  j["x_grid"] = x_grid;
  j["risk_values"] = risk_values;
  j["fosd_all_pass"] = fosd_all_pass;
  j["fosd_failed_pairs"] = fosd_failed_pairs;
  j["worst_increase"] = worst_increase;
  j["monotone_pass"] = monotone_pass;
  return j;
}

DominanceConsistencyReport check_dominance_consistency(const RiskMeasureSpec& spec,
                                                       const ParameterizedLossModel& model,
                                                       const std::vector<double>& x_grid,
                                                       double tol) {
  if (x_grid.size() < 2)
    throw std::invalid_argument("dominance check: grid needs at least 2 points");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (!(x_grid[i] > x_grid[i - 1]))
      throw std::invalid_argument("dominance check: grid must be strictly increasing");

  DominanceConsistencyReport rep;
  rep.x_grid = x_grid;
  rep.risk_values.reserve(x_grid.size());
  for (double x : x_grid) rep.risk_values.push_back(evaluate(spec, model.distribution_at(x)));

  rep.worst_increase = -1e300;
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i) {
    const FosdReport fosd = check_fosd(model, x_grid[i], x_grid[i + 1], tol);
    if (!fosd.pass) {
      rep.fosd_failed_pairs.push_back(i);
      continue;
    }
    rep.worst_increase = std::max(rep.worst_increase, rep.risk_values[i + 1] - rep.risk_values[i]);
  }
  rep.fosd_all_pass = rep.fosd_failed_pairs.empty();
  rep.monotone_pass = rep.worst_increase <= tol;
  return rep;
}

}  // namespace riskcontract
