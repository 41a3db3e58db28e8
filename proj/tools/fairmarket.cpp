// fairmarket: fairness metrics, replica-market simulation and maxent solving
// for salary distributions.

#include <CLI11.hpp>

#include <iostream>

#include "fairmarket/io/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = fairmarket::cli;

  CLI::App app{"Fairness metrics, labor-market exchange simulation and maximum-entropy salary distributions"};
  app.require_subcommand(1);

  cli::AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Fairness report (JSON) for a salary CSV");
  analyze_cmd->add_option("input", analyze.input, "CSV with a 'salary' column and optional 'category'")->required();
  analyze_cmd->add_option("-o,--output", analyze.output, "Report path, '-' for stdout");
  analyze_cmd->add_flag("--fit", analyze.fit, "Include a lognormal fit and KS distance");

  cli::SimulateOptions simulate;
  std::uint64_t seed = 0;
  std::string resume;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run replica companies to equilibrium");
  simulate_cmd->add_option("config", simulate.config, "Simulation config (.toml)")->required();
  auto* seed_opt = simulate_cmd->add_option("--seed", seed, "Overrides the config seed");
  simulate_cmd->add_option("--trajectory", simulate.trajectory, "Per-round CSV path, '-' for stdout");
  simulate_cmd->add_option("--final", simulate.final_state, "Final-state JSON path, '-' for stdout");
  auto* resume_opt = simulate_cmd->add_option("--resume", resume, "Start from a final-state JSON file");

  cli::SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Maximum-entropy distribution on a salary grid");
  solve_cmd->add_option("--k", solve.k, "Number of grid levels")->capture_default_str();
  solve_cmd->add_option("--min", solve.min, "Lowest grid level");
  solve_cmd->add_option("--max", solve.max, "Highest grid level");
  solve_cmd->add_option("--s-ave", solve.s_ave, "Grid centre; default grid is [s_ave/50, 50 s_ave]");
  solve_cmd->add_option("--mean-s", solve.mean_s, "MEAN_S constraint target");
  solve_cmd->add_option("--mean-ln-s", solve.mean_ln_s, "MEAN_LN_S constraint target");
  solve_cmd->add_option("--mean-ln-s-sq", solve.mean_ln_s_sq, "MEAN_LN_S_SQ constraint target");
  solve_cmd->add_option("--lognormal-mu", solve.lognormal_mu, "Log-moment targets from lognormal mu");
  solve_cmd->add_option("--lognormal-sigma", solve.lognormal_sigma, "Log-moment targets from lognormal sigma");
  solve_cmd->add_option("--tol", solve.tolerance, "Residual tolerance")->capture_default_str();
  solve_cmd->add_option("--max-iter", solve.max_iterations, "Newton iteration cap")->capture_default_str();
  solve_cmd->add_option("--csv", solve.csv, "Solution CSV path, '-' for stdout");
  solve_cmd->add_option("--json", solve.json, "Multipliers JSON path, '-' for stdout");

  cli::FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Lognormal fit and KS distance for a salary CSV");
  fit_cmd->add_option("input", fit.input, "CSV with a 'salary' column")->required();
  fit_cmd->add_option("-o,--output", fit.output, "Fit JSON path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitInputError;
  }

  try {
    if (*analyze_cmd) return cli::analyze(analyze, std::cout);
    if (*simulate_cmd) {
      if (*seed_opt) simulate.seed = seed;
      if (*resume_opt) simulate.resume = resume;
      return cli::simulate(simulate, std::cout);
    }
    if (*solve_cmd) return cli::solve(solve, std::cout);
    if (*fit_cmd) return cli::fit(fit, std::cout);
  } catch (const fairmarket::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
  return cli::kExitFailure;
}
