#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "fairmarket/fairness.hpp"
#include "fairmarket/maxent.hpp"
#include "fairmarket/market.hpp"
#include "fairmarket/io/csv.hpp"

namespace fairmarket::io {

using Json = nlohmann::ordered_json;

struct LognormalFit {
  LognormalParams params;
  double ks = 0.0;
};

/// Fairness measures plus provenance; categories come from the `category`
/// column when present and from distinct salary levels otherwise.
struct ReportDocument {
  FairnessReport fairness;
  std::string source;
  std::size_t rows = 0;
  double normalized_entropy = 0.0;
  bool categories_from_column = false;
  std::vector<std::string> category_labels;
  std::vector<std::int64_t> category_counts;
  std::vector<Money> category_totals;
  double category_entropy = 0.0;
  std::optional<TheilDecomposition> decomposition;
  std::optional<LognormalFit> fit;
};

ReportDocument analyze_table(const SalaryTable& table, bool with_fit);
LognormalFit fit_table(const SalaryTable& table);

Json to_json(const ReportDocument& report);
Json fit_to_json(const LognormalFit& fit, const SalaryTable& table);

/// Columns: round,trades,mean_entropy_nats,mean_log_w_nats
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
Json final_state_json(const Trajectory& trajectory, const NegotiationPolicy& policy);
/// Rebuilds the ensemble stored by final_state_json; the round counter is reset to 0.
MarketEnsemble ensemble_from_json(const Json& doc, std::uint64_t seed);

/// Columns: level,probability
void write_solution_csv(std::ostream& out, const SalaryGrid& grid, const MaxentSolution& solution);
Json solution_json(const SalaryGrid& grid, const ConstraintSet& constraints, const MaxentSolution& solution);

/// dump with a trailing newline
std::string render(const Json& doc);

}  // namespace fairmarket::io
