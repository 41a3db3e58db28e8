#include "fairmarket/market.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "fairmarket/error.hpp"
#include "fairmarket/fairness.hpp"
#include "fairmarket/random.hpp"
#include "fairmarket/statmech.hpp"

namespace fairmarket {

namespace {

__extension__ typedef __int128 i128;

constexpr std::uint64_t kPairingStream = 0x7061697273ULL;  // "pairs"
constexpr std::uint64_t kInitStream = 0x696e6974ULL;       // "init"

std::int64_t round_half_even(i128 num, i128 den) {
  i128 q = num / den;
  const i128 r = num % den;
  if (2 * r > den || (2 * r == den && q % 2 != 0)) ++q;
  return static_cast<std::int64_t>(q);
}

struct Tier {
  Money salary;
  std::int64_t weight = 0;
  std::vector<std::size_t> members;
};

// Signed per-group corrections with sum weight_t * delta_t == deficit, found
// as a shortest path over partial sums: moving group t by one cent costs
// weight_t, ties go to fewer moves. Partial sums of an optimal path can be
// ordered to stay within max weight of [min(0, deficit), max(0, deficit)].
bool solve_correction(std::span<const std::int64_t> weights, std::int64_t deficit, std::vector<std::int64_t>& delta) {
  std::int64_t g = 0;
  std::int64_t max_w = 0;
  for (auto w : weights) {
    g = std::gcd(g, w);
    max_w = std::max(max_w, w);
  }
  if (g == 0 || deficit % g != 0) return false;
  const std::int64_t lo = std::min<std::int64_t>(0, deficit) - max_w;
  const std::int64_t hi = std::max<std::int64_t>(0, deficit) + max_w;
  const auto width = static_cast<std::size_t>(hi - lo + 1);

  using Cost = std::pair<std::int64_t, std::int64_t>;  // (cents moved, moves)
  constexpr Cost kUnreached{std::numeric_limits<std::int64_t>::max(), 0};
  std::vector<Cost> best(width, kUnreached);
  std::vector<std::pair<int, int>> via(width, {-1, 0});  // (group, sign)
  std::priority_queue<std::pair<Cost, std::int64_t>, std::vector<std::pair<Cost, std::int64_t>>, std::greater<>> queue;
  auto slot = [&](std::int64_t v) { return static_cast<std::size_t>(v - lo); };
  best[slot(0)] = {0, 0};
  queue.push({{0, 0}, 0});
  while (!queue.empty()) {
    const auto [cost, v] = queue.top();
    queue.pop();
    if (cost != best[slot(v)]) continue;
    if (v == deficit) break;
    for (std::size_t t = 0; t < weights.size(); ++t) {
      for (int sign : {1, -1}) {
        const std::int64_t u = v + sign * weights[t];
        if (u < lo || u > hi) continue;
        const Cost next{cost.first + weights[t], cost.second + 1};
        if (next < best[slot(u)]) {
          best[slot(u)] = next;
          via[slot(u)] = {static_cast<int>(t), sign};
          queue.push({next, u});
        }
      }
    }
  }
  if (best[slot(deficit)] == kUnreached) return false;
  delta.assign(weights.size(), 0);
  for (std::int64_t v = deficit; v != 0;) {
    const auto [t, sign] = via[slot(v)];
    delta[static_cast<std::size_t>(t)] += sign;
    v -= sign * weights[static_cast<std::size_t>(t)];
  }
  return true;
}

// Distributes `deficit` cents over groups (tiers or single classes) whose
// salaries are floors of exact targets. Returns false if no exact fix found.
bool settle_deficit(std::vector<std::int64_t>& floors, std::span<const std::int64_t> weights,
                    std::span<const i128> remainders, std::int64_t deficit) {
  std::vector<std::size_t> order(floors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Largest remainder first; ties go to the higher-salaried group.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return remainders[x] != remainders[y] ? remainders[x] > remainders[y] : x > y;
  });
  for (auto t : order) {
    if (deficit == 0) break;
    if (weights[t] <= deficit) {
      floors[t] += 1;
      deficit -= weights[t];
    }
  }
  if (deficit == 0) return true;
  std::vector<std::int64_t> delta;
  if (!solve_correction(weights, deficit, delta)) return false;
  for (std::size_t t = 0; t < floors.size(); ++t) floors[t] += delta[t];
  return true;
}

bool order_preserved(std::span<const SkillClass> before, std::span<const SkillClass> after) {
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (after[i].salary <= Money{}) return false;
    for (std::size_t j = 0; j < before.size(); ++j) {
      if (before[i].salary < before[j].salary && after[i].salary > after[j].salary) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<Money> negotiate_salary(Money salary_a, Money salary_b, const NegotiationPolicy& policy) {
  policy.validate();
  const Money diff = gap(salary_a, salary_b);
  if (diff <= policy.epsilon) return std::nullopt;
  const Money low = std::min(salary_a, salary_b);
  const auto concession =
      round_half_even(static_cast<i128>(diff.cents()) * policy.alpha.num(), policy.alpha.den());
  return low + Money::from_cents(concession);
}

CompanyState budget_repair(const PayrollDraft& draft) {
  for (const auto& c : draft.classes) {
    if (c.salary <= Money{}) {
      throw Error(ErrorCode::NonPositiveSalary, "budget repair needs positive salaries (class " +
                                                    std::to_string(c.class_id) + ")");
    }
  }
  const Money payroll = draft.payroll();
  if (payroll <= Money{}) throw Error(ErrorCode::DegenerateState, "total payroll is zero");
  if (draft.budget <= Money{}) throw Error(ErrorCode::DegenerateState, "budget must be positive");
  if (payroll == draft.budget) return CompanyState(draft.company_id, draft.classes, draft.budget);

  const i128 budget = draft.budget.cents();
  const i128 total = payroll.cents();

  // First attempt: keep equal salaries equal by moving whole tiers.
  std::vector<Tier> tiers;
  {
    std::vector<std::size_t> idx(draft.classes.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return draft.classes[x].salary < draft.classes[y].salary;
    });
    for (auto i : idx) {
      const auto& c = draft.classes[i];
      if (tiers.empty() || tiers.back().salary != c.salary) tiers.push_back({c.salary, 0, {}});
      tiers.back().weight += c.count;
      tiers.back().members.push_back(i);
    }
  }

  auto attempt = [&](std::span<const Money> salaries, std::span<const std::int64_t> weights)
      -> std::optional<std::vector<std::int64_t>> {
    std::vector<std::int64_t> floors;
    std::vector<i128> remainders;
    i128 assigned = 0;
    for (std::size_t t = 0; t < salaries.size(); ++t) {
      const i128 scaled = static_cast<i128>(salaries[t].cents()) * budget;
      floors.push_back(static_cast<std::int64_t>(scaled / total));
      remainders.push_back(scaled % total);
      assigned += static_cast<i128>(floors.back()) * weights[t];
    }
    if (!settle_deficit(floors, weights, remainders, static_cast<std::int64_t>(budget - assigned))) {
      return std::nullopt;
    }
    return floors;
  };

  auto build = [&](const std::vector<Money>& new_salary) -> std::optional<CompanyState> {
    auto classes = draft.classes;
    for (std::size_t i = 0; i < classes.size(); ++i) classes[i].salary = new_salary[i];
    if (!order_preserved(draft.classes, classes)) return std::nullopt;
    return CompanyState(draft.company_id, std::move(classes), draft.budget);
  };

  {
    std::vector<Money> salaries;
    std::vector<std::int64_t> weights;
    for (const auto& t : tiers) {
      salaries.push_back(t.salary);
      weights.push_back(t.weight);
    }
    if (auto floors = attempt(salaries, weights)) {
      std::vector<Money> new_salary(draft.classes.size());
      for (std::size_t t = 0; t < tiers.size(); ++t) {
        for (auto i : tiers[t].members) new_salary[i] = Money::from_cents((*floors)[t]);
      }
      if (auto state = build(new_salary)) return *state;
    }
  }
  {
    // Tier weights can share a factor the budget lacks; fall back to classes.
    std::vector<Money> salaries;
    std::vector<std::int64_t> weights;
    for (const auto& c : draft.classes) {
      salaries.push_back(c.salary);
      weights.push_back(c.count);
    }
    if (auto floors = attempt(salaries, weights)) {
      std::vector<Money> new_salary;
      for (auto f : *floors) new_salary.push_back(Money::from_cents(f));
      if (auto state = build(new_salary)) return *state;
    }
  }
  throw Error(ErrorCode::DegenerateState, "cannot meet budget " + draft.budget.str() + " exactly for company " +
                                              std::to_string(draft.company_id) + " without reordering salaries");
}

CompanyState budget_repair(const CompanyState& company) { return budget_repair(company.draft()); }

PairOutcome interact_pair(const CompanyState& a, const CompanyState& b, const NegotiationPolicy& policy,
                          std::int64_t round) {
  if (!are_replicas(a, b)) {
    throw Error(ErrorCode::NotReplicas,
                "companies " + std::to_string(a.id()) + " and " + std::to_string(b.id()) + " are not replicas");
  }
  PayrollDraft draft_a = a.draft();
  PayrollDraft draft_b = b.draft();
  std::vector<TradeEvent> trades;
  for (auto& ca : draft_a.classes) {
    auto cb = std::find_if(draft_b.classes.begin(), draft_b.classes.end(),
                           [&](const SkillClass& c) { return c.class_id == ca.class_id; });
    const auto settled = negotiate_salary(ca.salary, cb->salary, policy);
    if (!settled) continue;
    trades.push_back({round, a.id(), b.id(), ca.class_id, ca.salary, cb->salary, *settled});
    ca.salary = *settled;
    cb->salary = *settled;
  }
  if (trades.empty()) return {a, b, {}};
  return {budget_repair(draft_a), budget_repair(draft_b), std::move(trades)};
}

std::vector<std::pair<std::size_t, std::size_t>> round_pairing(std::size_t companies, std::uint64_t seed,
                                                               std::int64_t round) {
  std::vector<std::size_t> order(companies);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, kPairingStream, static_cast<std::uint64_t>(round)));
  for (std::size_t i = companies; i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i + 1 < companies; i += 2) pairs.emplace_back(order[i], order[i + 1]);
  return pairs;
}

RoundOutcome run_round(const MarketEnsemble& market, const NegotiationPolicy& policy) {
  if (market.size() < 2) throw Error(ErrorCode::TooFewCompanies, "a round needs at least two companies");
  const std::int64_t round = market.round() + 1;
  std::vector<CompanyState> companies(market.companies().begin(), market.companies().end());
  std::vector<TradeEvent> trades;
  // Pairs are disjoint, so each interaction only touches its own two slots.
  for (const auto& [i, j] : round_pairing(companies.size(), market.seed(), round)) {
    auto outcome = interact_pair(companies[i], companies[j], policy, round);
    companies[i] = std::move(outcome.a);
    companies[j] = std::move(outcome.b);
    trades.insert(trades.end(), outcome.trades.begin(), outcome.trades.end());
  }
  return {MarketEnsemble(std::move(companies), round, market.seed()), std::move(trades)};
}

bool has_incentive(const MarketEnsemble& market, const NegotiationPolicy& policy) {
  const auto companies = market.companies();
  if (companies.empty()) return false;
  for (const auto& reference : companies.front().classes()) {
    Money lo = reference.salary;
    Money hi = reference.salary;
    for (const auto& c : companies) {
      const Money s = c.find_class(reference.class_id)->salary;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (hi - lo > policy.epsilon) return true;
  }
  return false;
}

std::string_view to_string(RunStatus status) {
  return status == RunStatus::Converged ? "CONVERGED" : "ROUND_LIMIT";
}

RoundRecord describe(const MarketEnsemble& market, std::int64_t trades, bool keep_snapshots) {
  RoundRecord record;
  record.round = market.round();
  record.trades = trades;
  double share = 0.0;
  double category = 0.0;
  double log_w = 0.0;
  for (const auto& c : market.companies()) {
    auto macro = c.macrostate();
    share += share_entropy(c);
    category += shannon_entropy(macro);
    log_w += log_multiplicity(macro).log_w_nats;
    if (keep_snapshots) record.snapshots.push_back(std::move(macro));
  }
  const auto n = static_cast<double>(market.size());
  record.mean_share_entropy = share / n;
  record.mean_category_entropy = category / n;
  record.mean_log_w = log_w / n;
  return record;
}

Trajectory run_to_equilibrium(const MarketEnsemble& market, const NegotiationPolicy& policy, const StopRule& stop) {
  if (stop.max_rounds < 1) throw Error(ErrorCode::InvalidArgument, "max_rounds must be >= 1");
  if (stop.quiet_rounds < 1) throw Error(ErrorCode::InvalidArgument, "quiet_rounds must be >= 1");
  if (market.size() < 2) throw Error(ErrorCode::TooFewCompanies, "simulation needs at least two companies");
  policy.validate();

  Trajectory out{{}, market, RunStatus::RoundLimit, std::nullopt, 0};
  out.records.push_back(describe(market, 0, stop.keep_snapshots));
  if (!has_incentive(market, policy)) out.equilibrium_round = market.round();

  std::int64_t quiet = 0;
  for (std::int64_t r = 0; r < stop.max_rounds; ++r) {
    auto [next, trades] = run_round(out.final_state, policy);
    out.final_state = std::move(next);
    const auto count = static_cast<std::int64_t>(trades.size());
    out.total_trades += count;
    out.records.push_back(describe(out.final_state, count, stop.keep_snapshots));

    const bool settled = !has_incentive(out.final_state, policy);
    if (!settled) {
      out.equilibrium_round.reset();
    } else if (!out.equilibrium_round) {
      out.equilibrium_round = out.final_state.round();
    }
    quiet = count == 0 ? quiet + 1 : 0;
    if (quiet >= stop.quiet_rounds && settled) {
      out.status = RunStatus::Converged;
      break;
    }
  }
  return out;
}

MarketEnsemble build_ensemble(std::span<const ClassTemplate> classes, std::size_t companies, Money budget,
                              std::uint64_t seed) {
  if (classes.empty()) throw Error(ErrorCode::InvalidArgument, "ensemble needs at least one class");
  std::int64_t n = 0;
  for (const auto& c : classes) n += c.count;
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "ensemble needs a positive headcount");
  const auto s_ave = divide(budget, n).quotient.cents();
  const auto lo = std::max<std::int64_t>(1, s_ave / 4);
  const auto hi = std::max<std::int64_t>(lo, 4 * s_ave);

  std::vector<CompanyState> out;
  out.reserve(companies);
  for (std::size_t k = 0; k < companies; ++k) {
    Rng rng(derive_seed(seed, kInitStream, k));
    PayrollDraft draft{static_cast<CompanyId>(k), {}, budget};
    bool random = false;
    for (const auto& c : classes) {
      Money salary;
      if (c.salary) {
        salary = *c.salary;
      } else {
        salary = Money::from_cents(lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
        random = true;
      }
      draft.classes.push_back({c.class_id, c.count, salary, c.value_rank});
    }
    out.push_back(random ? budget_repair(draft) : CompanyState(draft.company_id, draft.classes, budget));
  }
  return MarketEnsemble(std::move(out), 0, seed);
}

}  // namespace fairmarket
