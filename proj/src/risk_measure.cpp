#include "riskcontract/risk_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace riskcontract {

namespace {

struct Atom {
  double value;
  double prob;
};

/// Sorting by (value, prob) makes evaluation independent of the order the
/// sample space was presented in, bit for bit.
std::vector<Atom> canonical_atoms(std::span<const double> values,
                                  std::span<const double> probs) {
  if (values.size() != probs.size())
    throw std::invalid_argument("evaluate: value/probability size mismatch");
  if (values.empty()) throw std::invalid_argument("evaluate: empty sample space");
  double sum = 0.0;
  std::vector<Atom> atoms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("evaluate: loss values must be finite");
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i]))
      throw std::invalid_argument("evaluate: probabilities must be nonnegative");
    atoms[i] = {values[i], probs[i]};
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > DiscreteDistribution::prob_sum_tol)
    throw std::invalid_argument("evaluate: probabilities sum to " + std::to_string(sum));
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.value != b.value ? a.value < b.value : a.prob < b.prob;
  });
  return atoms;
}

double eval_expectation(const std::vector<Atom>& atoms) {
  double acc = 0.0;
  for (const Atom& a : atoms) acc += a.value * a.prob;
  return acc;
}

/// Exact tail average: walk the sorted atoms from the largest loss down,
/// consuming probability mass 1 - level and splitting the boundary atom.
double eval_avar(const std::vector<Atom>& atoms, double level) {
  const double tail = 1.0 - level;
  double budget = tail;
  double acc = 0.0;
  for (std::size_t i = atoms.size(); i-- > 0 && budget > 0.0;) {
    const double take = std::min(atoms[i].prob, budget);
    acc += atoms[i].value * take;
    budget -= take;
  }
  return acc / tail;
}

double eval_semideviation(const std::vector<Atom>& atoms, double theta) {
  const double mean = eval_expectation(atoms);
  double dev = 0.0;
  for (const Atom& a : atoms) dev += std::max(a.value - mean, 0.0) * a.prob;
  return mean + theta * dev;
}

double eval_spec(const RiskMeasureSpec& spec, const std::vector<Atom>& atoms) {
  switch (spec.kind()) {
    case RiskMeasureSpec::Kind::Expectation:
      return eval_expectation(atoms);
    case RiskMeasureSpec::Kind::AVaR:
      return eval_avar(atoms, spec.level());
    case RiskMeasureSpec::Kind::Semideviation:
      return eval_semideviation(atoms, spec.theta());
    case RiskMeasureSpec::Kind::Mixture:
      return spec.weight() * eval_spec(spec.left(), atoms) +
             (1.0 - spec.weight()) * eval_spec(spec.right(), atoms);
  }
  throw std::logic_error("evaluate: unknown risk measure kind");
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

RiskMeasureSpec RiskMeasureSpec::expectation() {
  return RiskMeasureSpec(Kind::Expectation, 0.0);
}

RiskMeasureSpec RiskMeasureSpec::avar(double level) {
  if (!(level >= 0.0 && level < 1.0))
    throw std::invalid_argument("risk measure: avar level must lie in [0, 1)");
  return RiskMeasureSpec(Kind::AVaR, level);
}

RiskMeasureSpec RiskMeasureSpec::semideviation(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("risk measure: semideviation theta must lie in [0, 1]");
  return RiskMeasureSpec(Kind::Semideviation, theta);
}

RiskMeasureSpec RiskMeasureSpec::mixture(double weight, RiskMeasureSpec left,
                                         RiskMeasureSpec right) {
  if (!(weight >= 0.0 && weight <= 1.0))
    throw std::invalid_argument("risk measure: mixture weight must lie in [0, 1]");
  RiskMeasureSpec m(Kind::Mixture, weight);
  m.left_ = std::make_shared<const RiskMeasureSpec>(std::move(left));
  m.right_ = std::make_shared<const RiskMeasureSpec>(std::move(right));
  if (m.depth() > max_mixture_depth)
    throw std::invalid_argument("risk measure: mixture nesting exceeds depth " +
                                std::to_string(max_mixture_depth));
  return m;
}

double RiskMeasureSpec::level() const {
  if (kind_ != Kind::AVaR) throw std::logic_error("risk measure: not an avar spec");
  return param_;
}

double RiskMeasureSpec::theta() const {
  if (kind_ != Kind::Semideviation)
    throw std::logic_error("risk measure: not a semideviation spec");
  return param_;
}

double RiskMeasureSpec::weight() const {
  if (kind_ != Kind::Mixture) throw std::logic_error("risk measure: not a mixture spec");
  return param_;
}

const RiskMeasureSpec& RiskMeasureSpec::left() const {
  if (!left_) throw std::logic_error("risk measure: not a mixture spec");
  return *left_;
}

const RiskMeasureSpec& RiskMeasureSpec::right() const {
  if (!right_) throw std::logic_error("risk measure: not a mixture spec");
  return *right_;
}

int RiskMeasureSpec::depth() const noexcept {
  if (kind_ != Kind::Mixture) return 0;
  return 1 + std::max(left_->depth(), right_->depth());
}

std::string RiskMeasureSpec::describe() const {
  switch (kind_) {
    case Kind::Expectation:
      return "expectation";
    case Kind::AVaR:
      return "avar(" + format_param(param_) + ")";
    case Kind::Semideviation:
      return "semideviation(" + format_param(param_) + ")";
    case Kind::Mixture:
      return "mixture(" + format_param(param_) + ", " + left_->describe() + ", " +
             right_->describe() + ")";
  }
  return "unknown";
}

double evaluate(const RiskMeasureSpec& spec, std::span<const double> values,
                std::span<const double> probs) {
  return eval_spec(spec, canonical_atoms(values, probs));
}

double evaluate(const RiskMeasureSpec& spec, const DiscreteDistribution& dist) {
  return evaluate(spec, std::span<const double>(dist.support()),
                  std::span<const double>(dist.probs()));
}

AvarDualSolution dual_evaluate_avar(const DiscreteDistribution& dist, double level) {
  if (!(level >= 0.0 && level < 1.0))
    throw std::invalid_argument("risk measure: avar level must lie in [0, 1)");
  const auto& z = dist.support();
  const auto& p = dist.probs();
  const double tail = 1.0 - level;

  AvarDualSolution sol;
  sol.density.weights.assign(z.size(), 0.0);
  double budget = tail;
  for (std::size_t i = z.size(); i-- > 0 && budget > 0.0;) {
    if (p[i] <= 0.0) continue;
    const double take = std::min(p[i], budget);
    sol.density.weights[i] = take / (tail * p[i]);
    budget -= take;
    sol.var = z[i];
    sol.boundary_fraction = take / p[i];
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) acc += z[i] * sol.density.weights[i] * p[i];
  sol.value = acc;
  return sol;
}

}  // namespace riskcontract
