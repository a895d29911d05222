#include "riskcontract/commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "riskcontract/axiom_check.hpp"
#include "riskcontract/case_study.hpp"
#include "riskcontract/contract.hpp"
#include "riskcontract/scenario.hpp"

namespace riskcontract {

namespace {

using nlohmann::json;

std::filesystem::path resolve_out_dir(const Scenario& sc, const CommandOptions& opts) {
  const std::filesystem::path dir = opts.out_dir ? std::filesystem::path(*opts.out_dir)
                                                 : sc.out_dir;
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("config: output directory does not exist: " + dir.string());
  return dir;
}

std::filesystem::path output_file(const Scenario& sc, const CommandOptions& opts,
                                  const std::string& name) {
  return resolve_out_dir(sc, opts) / (sc.prefix + name);
}

json tolerances_json(const Tolerances& tol) {
  return json{{"ir", tol.ir_tol},
              {"stationarity", tol.stationarity_tol},
              {"premium_floor", tol.premium_floor},
              {"condition", tol.condition_tol},
              {"fosd", tol.fosd_tol},
              {"convexity", tol.convexity_tol},
              {"derivative_step", tol.derivative_step},
              {"kink", tol.kink_tol}};
}

void write_json(const std::filesystem::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw ConfigError("config: cannot write " + file.string());
  out << j.dump(2) << '\n';
}

std::vector<double> solver_grid(const ProblemSpec& spec) {
  const double lo = spec.model.action_low();
  const double hi = spec.model.action_high();
  std::vector<double> xs(static_cast<std::size_t>(spec.grid_points));
  for (int i = 0; i < spec.grid_points; ++i)
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (spec.grid_points - 1);
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

CaseStudyConfig sweep_config(const Scenario& sc) {
  if (!sc.binomial)
    throw ConfigError("config: sweep commands need the binomial model");
  if (sc.problem.model.action_low() != 0.0 || sc.problem.model.action_high() != 1.0)
    throw ConfigError("config: sweeps expect the action interval [0, 1]");
  CaseStudyConfig cc;
  cc.n = sc.n;
  cc.kappa = sc.kappa;
  cc.m = sc.problem.investment_cost;
  cc.insurer = sc.problem.insurer;
  cc.mode = sc.mode;
  cc.fixed_x = sc.fixed_x;
  cc.grid_points = sc.problem.grid_points;
  cc.tol = sc.problem.tol;
  return cc;
}

template <typename Rows, typename Column>
json segment_sidecar(const Rows& rows, Column&& column) {
  std::vector<double> feasible;
  for (const auto& row : rows)
    if (row.feasible) feasible.push_back(column(row));
  if (feasible.size() < 2) return nullptr;
  return monotone_segments(feasible).to_json();
}

template <typename Rows>
json infeasible_sidecar(const Rows& rows) {
  json arr = json::array();
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (!row.feasible) arr.push_back({{"index", i}, {"reason", row.reason}});
    ++i;
  }
  return arr;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "riskcontract: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "riskcontract: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "riskcontract: error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int cmd_solve(const std::filesystem::path& config, const CommandOptions& opts) {
  return run_guarded([&]() -> int {
    const Scenario sc = load_scenario(config);
    SolveReport rep;
    try {
      rep = solve_contract(sc.problem);
    } catch (const NoContractError& e) {
      std::cerr << "riskcontract: " << e.what() << '\n';
      if (opts.verbose)
        for (const auto& [x, why] : e.reasons())
          std::cerr << "  x=" << x << ": " << infeasibility_name(why) << '\n';
      return kExitNoContract;
    }
    json out = rep.to_json();
    out["seed"] = opts.seed;
    out["tolerances"] = tolerances_json(sc.problem.tol);
    out["config"] = sc.echo;
    const auto file = output_file(sc, opts, "solve_report.json");
    write_json(file, out);
    std::cout << "solve: x_star=" << rep.x_star << " c_star=" << rep.contract.coverage
              << " q_star=" << rep.contract.premium << " -> " << file.string() << '\n';
    if (opts.verbose) std::cout << out.dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_sweep(const std::filesystem::path& config, SweepKind kind,
              const CommandOptions& opts) {
  return run_guarded([&]() -> int {
    const Scenario sc = load_scenario(config);
    CaseStudyConfig cc = sweep_config(sc);
    json sidecar;
    sidecar["seed"] = opts.seed;
    sidecar["tolerances"] = tolerances_json(sc.problem.tol);
    sidecar["config"] = sc.echo;

    std::filesystem::path csv_file;
    if (kind == SweepKind::Coverage) {
      cc.user_avar_levels = sc.avar_levels;
      const CoverageSweepTable table = run_coverage_vs_avar_level(cc);
      csv_file = output_file(sc, opts, "coverage_sweep.csv");
      write_coverage_csv(table, csv_file);
      sidecar["kind"] = "coverage";
      sidecar["mode"] = sweep_mode_name(table.mode);
      if (table.mode == SweepMode::FixedX) sidecar["fixed_x"] = table.fixed_x;
      sidecar["rows"] = table.rows.size();
      sidecar["infeasible"] = infeasible_sidecar(table.rows);
      sidecar["segments"] =
          segment_sidecar(table.rows, [](const CoverageSweepRow& r) { return r.c; });
    } else {
      if (sc.problem.user.kind() != RiskMeasureSpec::Kind::AVaR)
        throw ConfigError("config: the premium sweep needs an avar user measure");
      cc.user_avar_levels = {sc.problem.user.level()};
      cc.x_grid = sc.sweep_x;
      const PremiumSweepTable table = run_premium_vs_investment(cc);
      csv_file = output_file(sc, opts, "premium_sweep.csv");
      write_premium_csv(table, csv_file);
      sidecar["kind"] = "premium";
      sidecar["level"] = table.level;
      sidecar["x0"] = table.x0;
      sidecar["U_bar"] = table.U_bar;
      sidecar["rows"] = table.rows.size();
      sidecar["infeasible"] = infeasible_sidecar(table.rows);
      sidecar["segments"] =
          segment_sidecar(table.rows, [](const PremiumSweepRow& r) { return r.q; });
    }
    const auto sidecar_file = csv_file;
    write_json(std::filesystem::path(sidecar_file).replace_extension(".json"), sidecar);
    std::cout << "sweep: " << csv_file.string() << '\n';
    return kExitOk;
  });
}

int cmd_check(const std::filesystem::path& config, const CommandOptions& opts) {
  return run_guarded([&]() -> int {
    const Scenario sc = load_scenario(config);
    const std::vector<double> grid = solver_grid(sc.problem);
    json report;
    report["seed"] = opts.seed;
    report["tolerances"] = tolerances_json(sc.problem.tol);
    report["config"] = sc.echo;
    bool hard_fail = false;
    std::vector<std::string> warnings;

    for (const auto& [name, measure] :
         {std::pair<const char*, const RiskMeasureSpec*>{"insurer", &sc.problem.insurer},
          std::pair<const char*, const RiskMeasureSpec*>{"user", &sc.problem.user}}) {
      const AxiomReport axioms = check_axioms(*measure, 1000, 1e-9, opts.seed);
      report["axioms"][name] = axioms.to_json();
      report["axioms"][name]["measure"] = measure->describe();
      hard_fail = hard_fail || !axioms.all_pass();
      const DominanceConsistencyReport dom =
          check_dominance_consistency(*measure, sc.problem.model, grid,
                                      sc.problem.tol.fosd_tol);
      report["dominance"][name] = dom.to_json();
      hard_fail = hard_fail || !dom.monotone_pass;
    }

    FosdReport worst_fosd;
    worst_fosd.worst_gap = -1.0;
    bool fosd_pass = true;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const FosdReport r = check_fosd(sc.problem.model, grid[i], grid[i + 1],
                                      sc.problem.tol.fosd_tol);
      fosd_pass = fosd_pass && r.pass;
      if (r.worst_gap > worst_fosd.worst_gap) worst_fosd = r;
    }
    report["fosd"] = {{"pass", fosd_pass},
                      {"worst_gap", worst_fosd.worst_gap},
                      {"worst_pair", {worst_fosd.x1, worst_fosd.x2}},
                      {"worst_point", worst_fosd.worst_point}};
    hard_fail = hard_fail || !fosd_pass;

    const double h = sc.problem.tol.derivative_step > 0
                         ? sc.problem.tol.derivative_step
                         : 1e-4 * (sc.problem.model.action_high() -
                                   sc.problem.model.action_low());
    const ConvexityReport conv =
        check_density_convexity(sc.problem.model, grid, h, sc.problem.tol.convexity_tol);
    report["density_convexity"] = {{"pass", conv.pass},
                                   {"min_value", conv.min_value},
                                   {"min_x", conv.min_x},
                                   {"min_support_point", conv.min_support_point},
                                   {"warning_only", true}};
    if (!conv.pass) warnings.push_back("density_convexity_violated");

    report["warnings"] = warnings;
    report["all_pass"] = !hard_fail;
    const auto file = output_file(sc, opts, "check_report.json");
    write_json(file, report);
    std::cout << "check: " << (hard_fail ? "FAIL" : "pass")
              << (warnings.empty() ? "" : " (with warnings)") << " -> " << file.string()
              << '\n';
    return hard_fail ? kExitDiagnostic : kExitOk;
  });
}

}  // namespace riskcontract
