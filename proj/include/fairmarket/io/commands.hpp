#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fairmarket/error.hpp"

namespace fairmarket::cli {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitRoundLimit = 3;

/// "-" means standard output.
using OutputPath = std::string;

struct AnalyzeOptions {
  std::filesystem::path input;
  OutputPath output = "-";
  bool fit = false;
};

struct SimulateOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  OutputPath trajectory = "trajectory.csv";
  OutputPath final_state = "final_state.json";
  /// Start from a previously written final-state file instead of the config's classes.
  std::optional<std::filesystem::path> resume;
};

struct SolveOptions {
  std::size_t k = 512;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> s_ave;
  std::optional<double> mean_s;
  std::optional<double> mean_ln_s;
  std::optional<double> mean_ln_s_sq;
  /// Shorthand for mean_ln_s = mu and mean_ln_s_sq = mu^2 + sigma^2.
  std::optional<double> lognormal_mu;
  std::optional<double> lognormal_sigma;
  double tolerance = 1e-10;
  int max_iterations = 200;
  OutputPath csv = "solution.csv";
  OutputPath json = "multipliers.json";
};

struct FitOptions {
  std::filesystem::path input;
  OutputPath output = "-";
};

// Each command returns its exit status and throws fairmarket::Error on bad
// input; `stdout_stream` receives anything routed to "-".
int analyze(const AnalyzeOptions& options, std::ostream& stdout_stream);
int simulate(const SimulateOptions& options, std::ostream& stdout_stream);
int solve(const SolveOptions& options, std::ostream& stdout_stream);
int fit(const FitOptions& options, std::ostream& stdout_stream);

int exit_code_for(const Error& error);

}  // namespace fairmarket::cli
