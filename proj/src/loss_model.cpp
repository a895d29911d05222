#include "riskcontract/loss_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace riskcontract {

namespace {

std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[static_cast<std::size_t>(n)] = 1.0;
    return pmf;
  }
  pmf[0] = std::pow(1.0 - p, n);
  const double ratio = p / (1.0 - p);
  for (int k = 0; k < n; ++k)
    pmf[static_cast<std::size_t>(k) + 1] =
        pmf[static_cast<std::size_t>(k)] * ratio * (n - k) / (k + 1);
  double sum = 0.0;
  for (double v : pmf) sum += v;
  for (double& v : pmf) v /= sum;
  return pmf;
}

std::vector<double> normalized(std::vector<double> row) {
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("loss model: pmf entries must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("loss model: pmf row sums to " + std::to_string(sum));
  for (double& v : row) v /= sum;
  return row;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& token, const std::string& context) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("loss model: bad number '" + token + "' in " + context);
  }
  if (used != token.size())
    throw std::invalid_argument("loss model: bad number '" + token + "' in " + context);
  return v;
}

}  // namespace

ParameterizedLossModel::ParameterizedLossModel(double action_low, double action_high,
                                               BinomialRansomware family)
    : action_low_(action_low), action_high_(action_high), family_(family) {
  if (!(action_low_ < action_high_))
    throw std::invalid_argument("loss model: action interval is empty");
  if (family.n < 1) throw std::invalid_argument("loss model: need at least one machine");
  if (family.damping < 0.0)
    throw std::invalid_argument("loss model: damping must be nonnegative");
  for (double x : {action_low_, action_high_}) {
    const double p = 1.0 - family.damping * x * x;
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("loss model: lock probability leaves [0,1] at x=" +
                                  std::to_string(x));
  }
  support_.reserve(static_cast<std::size_t>(family.n) + 1);
  for (int k = 0; k <= family.n; ++k) support_.push_back(static_cast<double>(k));
}

ParameterizedLossModel::ParameterizedLossModel(double action_low, double action_high,
                                               TabulatedFamily family)
    : action_low_(action_low), action_high_(action_high), support_(family.support) {
  if (!(action_low_ < action_high_))
    throw std::invalid_argument("loss model: action interval is empty");
  if (family.actions.empty()) throw std::invalid_argument("loss model: no tabulated actions");
  if (family.pmf.size() != family.actions.size())
    throw std::invalid_argument("loss model: one pmf row per action required");
  for (std::size_t i = 1; i < family.actions.size(); ++i)
    if (!(family.actions[i] > family.actions[i - 1]))
      throw std::invalid_argument("loss model: actions must be strictly increasing");
  for (auto& row : family.pmf) {
    if (row.size() != support_.size())
      throw std::invalid_argument("loss model: pmf row length does not match support");
    row = normalized(std::move(row));
    DiscreteDistribution check(support_, row);  // validates support and row together
  }
  family_ = std::move(family);
}

DiscreteDistribution ParameterizedLossModel::distribution_at(double x) const {
  return DiscreteDistribution(support_, pmf_at(x));
}

std::vector<double> ParameterizedLossModel::pmf_at(double x) const {
  if (!contains(x))
    throw std::domain_error("loss model: action " + std::to_string(x) + " outside [" +
                            std::to_string(action_low_) + ", " +
                            std::to_string(action_high_) + "]");
  if (const auto* b = std::get_if<BinomialRansomware>(&family_)) {
    const double p = 1.0 - b->damping * x * x;
    if (p < 0.0 || p > 1.0)
      throw std::domain_error("loss model: lock probability leaves [0,1] at x=" +
                              std::to_string(x));
    return binomial_pmf(b->n, p);
  }
  const auto& t = std::get<TabulatedFamily>(family_);
  const auto& a = t.actions;
  if (x <= a.front()) return t.pmf.front();
  if (x >= a.back()) return t.pmf.back();
  const auto hi = std::upper_bound(a.begin(), a.end(), x);
  const std::size_t j = static_cast<std::size_t>(hi - a.begin());
  const double w = (x - a[j - 1]) / (a[j] - a[j - 1]);
  std::vector<double> row(support_.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    row[k] = (1.0 - w) * t.pmf[j - 1][k] + w * t.pmf[j][k];
    sum += row[k];
  }
  for (double& v : row) v /= sum;
  return row;
}

ParameterizedLossModel ParameterizedLossModel::from_csv(const std::filesystem::path& file,
                                                        double action_low,
                                                        double action_high) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("loss model: cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("loss model: empty file " + file.string());
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "x")
    throw std::invalid_argument("loss model: header must be 'x,<support values...>'");
  TabulatedFamily fam;
  for (std::size_t i = 1; i < header.size(); ++i)
    fam.support.push_back(parse_double(header[i], "header"));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("loss model: line " + std::to_string(line_no) +
                                  " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(header.size()));
    const std::string ctx = "line " + std::to_string(line_no);
    fam.actions.push_back(parse_double(fields[0], ctx));
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i)
      row.push_back(parse_double(fields[i], ctx));
    fam.pmf.push_back(std::move(row));
  }
  return ParameterizedLossModel(action_low, action_high, std::move(fam));
}

FosdReport check_fosd(const ParameterizedLossModel& model, double x1, double x2,
                      double tol) {
  if (!(x1 <= x2))
    throw std::invalid_argument("fosd check: need x1 <= x2");
  const auto p1 = model.pmf_at(x1);
  const auto p2 = model.pmf_at(x2);
  const auto& support = model.support();
  FosdReport rep;
  rep.x1 = x1;
  rep.x2 = x2;
  rep.worst_gap = -1.0;
  double f1 = 0.0, f2 = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    f1 += p1[i];
    f2 += p2[i];
    const double gap = f1 - f2;
    if (gap > rep.worst_gap) {
      rep.worst_gap = gap;
      rep.worst_point = support[i];
    }
  }
  rep.pass = rep.worst_gap <= tol;
  return rep;
}

ConvexityReport check_density_convexity(const ParameterizedLossModel& model,
                                        const std::vector<double>& x_grid, double h,
                                        double tol) {
  if (x_grid.size() < 3)
    throw std::invalid_argument("convexity check: grid needs at least 3 points");
  if (!(h > 0.0)) throw std::invalid_argument("convexity check: step must be positive");
  ConvexityReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (double x : x_grid) {
    if (x - h < model.action_low() || x + h > model.action_high()) continue;
    const auto lo = model.pmf_at(x - h);
    const auto mid = model.pmf_at(x);
    const auto hi = model.pmf_at(x + h);
    std::vector<double> d2(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
      d2[k] = (lo[k] - 2.0 * mid[k] + hi[k]) / (h * h);
      if (d2[k] < rep.min_value) {
        rep.min_value = d2[k];
        rep.min_x = x;
        rep.min_support_point = model.support()[k];
      }
    }
    rep.x_points.push_back(x);
    rep.second_differences.push_back(std::move(d2));
  }
  if (rep.x_points.empty())
    throw std::invalid_argument("convexity check: no grid point admits x +- h inside the action interval");
  rep.pass = rep.min_value >= -tol;
  return rep;
}

}  // namespace riskcontract
