#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fairmarket/types.hpp"

namespace fairmarket {

struct TradeEvent {
  std::int64_t round = 0;
  CompanyId company_a = 0;
  CompanyId company_b = 0;
  int class_id = 0;
  Money salary_a_before;
  Money salary_b_before;
  Money settled;

  bool operator==(const TradeEvent&) const = default;
};

/// Settlement between two offers: min + round_half_even(alpha * gap).
/// Returns nullopt (no trade) when the gap does not exceed epsilon.
std::optional<Money> negotiate_salary(Money salary_a, Money salary_b, const NegotiationPolicy& policy);

/// Rescales a draft payroll onto its budget exactly.
///
/// Salaries are multiplied by budget / payroll in exact rational arithmetic
/// and floored to minor units. The leftover cents go out by largest
/// remainder, one cent per employee of a salary tier (classes sharing a
/// salary move together), highest remainder first. When the leftover cannot
/// be matched by whole tiers, a small signed per-tier correction is solved
/// for exactly. Salary order across classes is never inverted.
CompanyState budget_repair(const PayrollDraft& draft);
CompanyState budget_repair(const CompanyState& company);

struct PairOutcome {
  CompanyState a;
  CompanyState b;
  std::vector<TradeEvent> trades;
};

/// Both companies adopt the negotiated salary for every class whose gap
/// exceeds epsilon, then each is budget-repaired. Throws NotReplicas.
PairOutcome interact_pair(const CompanyState& a, const CompanyState& b, const NegotiationPolicy& policy,
                          std::int64_t round = 0);

/// Disjoint random pairs for one round, derived only from (seed, round).
/// With an odd count the last company of the shuffle sits out.
std::vector<std::pair<std::size_t, std::size_t>> round_pairing(std::size_t companies, std::uint64_t seed,
                                                               std::int64_t round);

struct RoundOutcome {
  MarketEnsemble ensemble;
  std::vector<TradeEvent> trades;
};

RoundOutcome run_round(const MarketEnsemble& market, const NegotiationPolicy& policy);

/// True while some pair of companies still differs by more than epsilon in
/// some class, i.e. some employee still has a reason to move.
bool has_incentive(const MarketEnsemble& market, const NegotiationPolicy& policy);

struct StopRule {
  std::int64_t max_rounds = 10'000;
  std::int64_t quiet_rounds = 3;
  /// Per-company macrostate snapshots for every round.
  bool keep_snapshots = true;
};

enum class RunStatus { Converged, RoundLimit };

std::string_view to_string(RunStatus status);

struct RoundRecord {
  std::int64_t round = 0;
  std::int64_t trades = 0;
  double mean_share_entropy = 0.0;
  /// Mean categorical entropy of the per-company macrostates.
  double mean_category_entropy = 0.0;
  double mean_log_w = 0.0;
  std::vector<CategoryDistribution> snapshots;
};

struct Trajectory {
  /// Record 0 describes the starting ensemble; record r the state after round r.
  std::vector<RoundRecord> records;
  MarketEnsemble final_state;
  RunStatus status = RunStatus::RoundLimit;
  /// First recorded round from which no employee had an incentive to move.
  std::optional<std::int64_t> equilibrium_round;
  std::int64_t total_trades = 0;
};

RoundRecord describe(const MarketEnsemble& market, std::int64_t trades, bool keep_snapshots);

/// Runs rounds until `quiet_rounds` consecutive rounds had no trade and no
/// incentive remains anywhere in the ensemble, or `max_rounds` rounds ran.
Trajectory run_to_equilibrium(const MarketEnsemble& market, const NegotiationPolicy& policy,
                              const StopRule& stop = {});

/// Class layout shared by every replica; a missing salary is drawn at random.
struct ClassTemplate {
  int class_id = 0;
  std::int64_t count = 0;
  std::optional<Money> salary;
  int value_rank = 0;
};

/// Builds a replica ensemble. Random salaries are drawn uniformly in
/// [S_ave/4, 4 S_ave] per company from (seed, company index), after which the
/// company is budget-repaired. Fully specified templates must already meet
/// the budget exactly.
MarketEnsemble build_ensemble(std::span<const ClassTemplate> classes, std::size_t companies, Money budget,
                              std::uint64_t seed);

}  // namespace fairmarket
