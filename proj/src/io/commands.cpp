#include "fairmarket/io/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fairmarket/io/config.hpp"
#include "fairmarket/io/csv.hpp"
#include "fairmarket/io/report.hpp"

namespace fairmarket::cli {

namespace {

void emit(const OutputPath& path, const std::string& content, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace

int exit_code_for(const Error& error) {
  return error.code() == ErrorCode::NoConvergence ? kExitFailure : kExitInputError;
}

int analyze(const AnalyzeOptions& options, std::ostream& stdout_stream) {
  const auto table = io::read_salary_csv(options.input);
  const auto report = io::analyze_table(table, options.fit);
  emit(options.output, io::render(io::to_json(report)), stdout_stream);
  return kExitOk;
}

int simulate(const SimulateOptions& options, std::ostream& stdout_stream) {
  const auto config = io::load_sim_config(options.config);
  const auto seed = io::resolve_seed(config, options.seed);

  std::optional<MarketEnsemble> start;
  if (options.resume) {
    std::ifstream in(*options.resume);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + options.resume->string());
    io::Json doc;
    try {
      doc = io::Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, options.resume->string() + ": " + e.what());
    }
    start = io::ensemble_from_json(doc, seed);
  } else {
    start = config.initial_ensemble(seed);
  }

  const auto trajectory = run_to_equilibrium(*start, config.policy, config.stop);
  std::ostringstream csv;
  io::write_trajectory_csv(csv, trajectory);
  emit(options.trajectory, csv.str(), stdout_stream);
  emit(options.final_state, io::render(io::final_state_json(trajectory, config.policy)), stdout_stream);
  return trajectory.status == RunStatus::Converged ? kExitOk : kExitRoundLimit;
}

int solve(const SolveOptions& options, std::ostream& stdout_stream) {
  if (options.lognormal_mu.has_value() != options.lognormal_sigma.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "--lognormal-mu and --lognormal-sigma go together");
  }
  std::vector<Constraint> list;
  if (options.mean_s) list.push_back({ConstraintKind::MeanS, *options.mean_s});
  std::optional<double> mean_ln = options.mean_ln_s;
  std::optional<double> mean_ln_sq = options.mean_ln_s_sq;
  if (options.lognormal_mu) {
    if (mean_ln || mean_ln_sq) {
      throw Error(ErrorCode::InvalidArgument, "--lognormal-* cannot be combined with explicit log moments");
    }
    LognormalParams{*options.lognormal_mu, *options.lognormal_sigma}.validate();
    mean_ln = *options.lognormal_mu;
    mean_ln_sq = *options.lognormal_mu * *options.lognormal_mu + *options.lognormal_sigma * *options.lognormal_sigma;
  }
  if (mean_ln) list.push_back({ConstraintKind::MeanLnS, *mean_ln});
  if (mean_ln_sq) list.push_back({ConstraintKind::MeanLnSSq, *mean_ln_sq});
  const ConstraintSet constraints(std::move(list));

  std::optional<double> centre = options.s_ave;
  if (!centre && options.mean_s) centre = options.mean_s;
  if (!centre && mean_ln && options.lognormal_sigma) {
    centre = std::exp(*mean_ln + 0.5 * *options.lognormal_sigma * *options.lognormal_sigma);
  }
  double lo = 0.0;
  double hi = 0.0;
  if (options.min && options.max) {
    lo = *options.min;
    hi = *options.max;
  } else if (centre) {
    lo = options.min.value_or(*centre / 50.0);
    hi = options.max.value_or(*centre * 50.0);
  } else {
    throw Error(ErrorCode::InvalidArgument, "grid needs --min and --max, or --s-ave");
  }
  const auto grid = SalaryGrid::uniform(lo, hi, options.k);
  const auto solution = solve_maxent(grid, constraints, {options.tolerance, options.max_iterations});

  std::ostringstream csv;
  io::write_solution_csv(csv, grid, solution);
  emit(options.csv, csv.str(), stdout_stream);
  emit(options.json, io::render(io::solution_json(grid, constraints, solution)), stdout_stream);
  return kExitOk;
}

int fit(const FitOptions& options, std::ostream& stdout_stream) {
  const auto table = io::read_salary_csv(options.input);
  emit(options.output, io::render(io::fit_to_json(io::fit_table(table), table)), stdout_stream);
  return kExitOk;
}

}  // namespace fairmarket::cli
