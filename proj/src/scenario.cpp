#include "riskcontract/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <optional>

namespace riskcontract {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw ConfigError("config: " + context + ": " + message);
}

const json& require_object(const json& j, const std::string& context) {
  if (!j.is_object()) fail(context, "expected an object");
  return j;
}

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : require_object(j, context).items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(context, "unknown key '" + key + "'");
  }
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& context, const char* key) {
  const json* v = find(j, key);
  if (!v) fail(context, std::string("missing key '") + key + "'");
  if (!v->is_number()) fail(context, std::string("'") + key + "' must be a number");
  return v->get<double>();
}

double get_number_or(const json& j, const std::string& context, const char* key,
                     double fallback) {
  return find(j, key) ? get_number(j, context, key) : fallback;
}

int get_int_or(const json& j, const std::string& context, const char* key, int fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(context, std::string("'") + key + "' must be an integer");
  return v->get<int>();
}

std::string get_string_or(const json& j, const std::string& context, const char* key,
                          std::string fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(context, std::string("'") + key + "' must be a string");
  return v->get<std::string>();
}

std::vector<double> get_number_array(const json& j, const std::string& context) {
  if (!j.is_array()) fail(context, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(context, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int k) {
  std::vector<double> xs(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (k - 1);
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

/// Grid entry: either an explicit array or {"points": k, "low": a, "high": b}.
std::vector<double> parse_grid(const json& j, const std::string& context,
                               double default_low, double default_high) {
  if (j.is_array()) return get_number_array(j, context);
  check_keys(j, context, {"points", "low", "high"});
  const int points = get_int_or(j, context, "points", 41);
  if (points < 1) fail(context, "'points' must be at least 1");
  const double lo = get_number_or(j, context, "low", default_low);
  const double hi = get_number_or(j, context, "high", default_high);
  if (points == 1) return {lo};
  if (!(lo < hi)) fail(context, "'low' must be below 'high'");
  return linspace(lo, hi, points);
}

ParameterizedLossModel parse_model(const json& j, const std::filesystem::path& base_dir,
                                   bool& binomial, int& n_out, double& kappa_out) {
  const std::string context = "model";
  const std::string kind = get_string_or(j, context, "kind", "");
  if (kind == "binomial") {
    check_keys(j, context, {"kind", "n", "kappa", "action_low", "action_high"});
    const int n = get_int_or(j, context, "n", 10);
    const double kappa = get_number_or(j, context, "kappa", 0.8);
    const double lo = get_number_or(j, context, "action_low", 0.0);
    const double hi = get_number_or(j, context, "action_high", 1.0);
    binomial = true;
    n_out = n;
    kappa_out = kappa;
    try {
      return ParameterizedLossModel(lo, hi, BinomialRansomware{n, kappa});
    } catch (const std::exception& e) {
      fail(context, e.what());
    }
  }
  if (kind == "tabulated") {
    check_keys(j, context, {"kind", "csv", "actions", "support", "pmf", "action_low",
                            "action_high"});
    const double lo = get_number_or(j, context, "action_low", 0.0);
    const double hi = get_number_or(j, context, "action_high", 1.0);
    const json* csv = find(j, "csv");
    try {
      if (csv) {
        if (!csv->is_string()) fail(context, "'csv' must be a path string");
        if (find(j, "actions") || find(j, "support") || find(j, "pmf"))
          fail(context, "give either 'csv' or inline tables, not both");
        std::filesystem::path p = csv->get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        return ParameterizedLossModel::from_csv(p, lo, hi);
      }
      TabulatedFamily fam;
      const json* actions = find(j, "actions");
      const json* support = find(j, "support");
      const json* pmf = find(j, "pmf");
      if (!actions || !support || !pmf)
        fail(context, "tabulated model needs 'csv' or 'actions'+'support'+'pmf'");
      fam.actions = get_number_array(*actions, context + ".actions");
      fam.support = get_number_array(*support, context + ".support");
      if (!pmf->is_array()) fail(context + ".pmf", "expected an array of rows");
      for (const auto& row : *pmf)
        fam.pmf.push_back(get_number_array(row, context + ".pmf"));
      return ParameterizedLossModel(lo, hi, std::move(fam));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(context, e.what());
    }
  }
  fail(context, "'kind' must be 'binomial' or 'tabulated'");
}

Tolerances parse_tolerances(const json* j) {
  Tolerances tol;
  if (!j) return tol;
  const std::string context = "tolerances";
  check_keys(*j, context,
             {"ir", "stationarity", "premium_floor", "condition", "fosd", "convexity",
              "derivative_step", "kink"});
  tol.ir_tol = get_number_or(*j, context, "ir", tol.ir_tol);
  tol.stationarity_tol = get_number_or(*j, context, "stationarity", tol.stationarity_tol);
  tol.premium_floor = get_number_or(*j, context, "premium_floor", tol.premium_floor);
  tol.condition_tol = get_number_or(*j, context, "condition", tol.condition_tol);
  tol.fosd_tol = get_number_or(*j, context, "fosd", tol.fosd_tol);
  tol.convexity_tol = get_number_or(*j, context, "convexity", tol.convexity_tol);
  tol.derivative_step = get_number_or(*j, context, "derivative_step", tol.derivative_step);
  tol.kink_tol = get_number_or(*j, context, "kink", tol.kink_tol);
  return tol;
}

}  // namespace

RiskMeasureSpec parse_measure(const json& j, const std::string& context) {
  const std::string kind = get_string_or(j, context, "kind", "");
  try {
    if (kind == "expectation") {
      check_keys(j, context, {"kind"});
      return RiskMeasureSpec::expectation();
    }
    if (kind == "avar") {
      check_keys(j, context, {"kind", "level"});
      return RiskMeasureSpec::avar(get_number(j, context, "level"));
    }
    if (kind == "semideviation") {
      check_keys(j, context, {"kind", "theta"});
      return RiskMeasureSpec::semideviation(get_number(j, context, "theta"));
    }
    if (kind == "mixture") {
      check_keys(j, context, {"kind", "weight", "left", "right"});
      const json* left = find(j, "left");
      const json* right = find(j, "right");
      if (!left || !right) fail(context, "mixture needs 'left' and 'right'");
      return RiskMeasureSpec::mixture(get_number(j, context, "weight"),
                                      parse_measure(*left, context + ".left"),
                                      parse_measure(*right, context + ".right"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(context, e.what());
  }
  fail(context, "'kind' must be one of expectation, avar, semideviation, mixture");
}

Scenario parse_scenario(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "top level",
             {"model", "insurer", "user", "costs", "grids", "tolerances", "output"});
  for (const char* key : {"model", "insurer", "user", "costs"})
    if (!find(j, key)) fail("top level", std::string("missing section '") + key + "'");

  const json& costs = *find(j, "costs");
  check_keys(costs, "costs", {"investment"});
  const double m = get_number(costs, "costs", "investment");
  if (!(m > 0.0)) fail("costs", "'investment' must be positive");

  bool binomial = false;
  int n = 0;
  double kappa = 0;
  ParameterizedLossModel model = parse_model(*find(j, "model"), base_dir, binomial, n, kappa);
  Scenario sc{ProblemSpec{parse_measure(*find(j, "insurer"), "insurer"),
                          parse_measure(*find(j, "user"), "user"), std::move(model), m,
                          201, parse_tolerances(find(j, "tolerances"))},
              false,
              0,
              0.0,
              {},
              {},
              SweepMode::AtBaseline,
              0.5,
              ".",
              "",
              {}};
  sc.binomial = binomial;
  sc.n = n;
  sc.kappa = kappa;

  const double lo = sc.problem.model.action_low();
  const double hi = sc.problem.model.action_high();
  sc.avar_levels = linspace(0.0, 0.95, 41);
  sc.sweep_x = linspace(lo, hi, 41);
  sc.fixed_x = 0.5 * (lo + hi);
  if (const json* grids = find(j, "grids")) {
    const std::string context = "grids";
    check_keys(*grids, context, {"action_points", "avar_levels", "x", "mode", "fixed_x"});
    sc.problem.grid_points = get_int_or(*grids, context, "action_points", 201);
    if (sc.problem.grid_points < 3) fail(context, "'action_points' must be at least 3");
    if (const json* levels = find(*grids, "avar_levels"))
      sc.avar_levels = parse_grid(*levels, context + ".avar_levels", 0.0, 0.95);
    if (const json* xs = find(*grids, "x"))
      sc.sweep_x = parse_grid(*xs, context + ".x", lo, hi);
    const std::string mode = get_string_or(*grids, context, "mode", "at-baseline");
    try {
      sc.mode = parse_sweep_mode(mode);
    } catch (const std::exception& e) {
      fail(context, e.what());
    }
    sc.fixed_x = get_number_or(*grids, context, "fixed_x", sc.fixed_x);
    if (!sc.problem.model.contains(sc.fixed_x))
      fail(context, "'fixed_x' outside the action interval");
  }
  for (double a : sc.avar_levels)
    if (!(a >= 0.0 && a < 1.0)) fail("grids.avar_levels", "levels must lie in [0, 1)");
  for (double x : sc.sweep_x)
    if (!sc.problem.model.contains(x)) fail("grids.x", "grid leaves the action interval");

  if (const json* output = find(j, "output")) {
    check_keys(*output, "output", {"dir", "prefix"});
    sc.out_dir = get_string_or(*output, "output", "dir", ".");
    sc.prefix = get_string_or(*output, "output", "prefix", "");
  }
  sc.echo = j;
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + file.string() + ": " + e.what());
  }
  return parse_scenario(j, file.parent_path());
}

}  // namespace riskcontract
