#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairmarket/market.hpp"
#include "fairmarket/types.hpp"

namespace fairmarket::io {

// Simulation configs use a small TOML subset: `key = value` pairs, `#`
// comments, quoted strings, flat arrays, and `[[class]]` / `[[company]]`
// array tables. Money values may be bare ("60000") or quoted ("60000.00").

struct ConfigValue {
  std::string text;                 // scalar text, quotes removed
  std::vector<std::string> items;   // array elements, quotes removed
  bool is_array = false;
  bool quoted = false;
  int line = 0;
};

using ConfigTable = std::map<std::string, ConfigValue>;

struct ConfigDocument {
  ConfigTable root;
  std::map<std::string, std::vector<ConfigTable>> arrays;
};

/// Throws ConfigError with the offending line.
ConfigDocument parse_config_text(const std::string& text, const std::string& source);

struct ClassSpec {
  std::int64_t count = 0;
  std::optional<Money> salary;  // nullopt = RANDOM
  std::string name;
};

struct SimConfig {
  std::int64_t companies = 0;
  std::int64_t n_per_company = 0;
  Money budget;
  std::vector<ClassSpec> classes;
  /// Explicit starting salaries (one per class, class order) for the first
  /// companies; the rest follow `classes`.
  std::vector<std::vector<Money>> company_salaries;
  NegotiationPolicy policy;
  std::optional<std::uint64_t> seed;
  StopRule stop;

  void validate() const;
  /// Starting ensemble; `seed` must be resolved (see resolve_seed).
  MarketEnsemble initial_ensemble(std::uint64_t seed) const;
};

/// Throws ConfigError naming the field path, e.g. "class[2].count".
SimConfig parse_sim_config(const std::string& text, const std::string& source);
SimConfig load_sim_config(const std::filesystem::path& path);

/// The CLI seed wins over the config seed; neither is a ConfigError.
std::uint64_t resolve_seed(const SimConfig& config, std::optional<std::uint64_t> cli_seed);

}  // namespace fairmarket::io
