#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "riskcontract/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"risk-aware cyber-insurance contract design"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 1729;
  bool verbose = false;
  std::string kind;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config, "scenario config (JSON)")->required();
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "seed for randomized checks, echoed into reports");
    sub->add_flag("--verbose", verbose, "print full reports to stdout");
  };

  CLI::App* solve = app.add_subcommand("solve", "design the optimal contract");
  add_common(solve);
  CLI::App* sweep = app.add_subcommand("sweep", "run a case-study sweep");
  add_common(sweep);
  sweep->add_option("--kind", kind, "coverage or premium")
      ->required()
      ->check(CLI::IsMember({"coverage", "premium"}));
  CLI::App* check = app.add_subcommand("check", "run measure and model diagnostics");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : riskcontract::kExitConfig;
  }

  riskcontract::CommandOptions opts;
  if (!out.empty()) opts.out_dir = out;
  opts.seed = seed;
  opts.verbose = verbose;

  if (solve->parsed()) return riskcontract::cmd_solve(config, opts);
  if (sweep->parsed())
    return riskcontract::cmd_sweep(config,
                                   kind == "coverage" ? riskcontract::SweepKind::Coverage
                                                      : riskcontract::SweepKind::Premium,
                                   opts);
  return riskcontract::cmd_check(config, opts);
}
